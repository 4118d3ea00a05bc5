#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(GAMMAMIX_CLI) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe.get())) > 0) out.append(buf, n);
  const int status = pclose(pipe.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("gammamix_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

const std::string kData = GAMMAMIX_TEST_DATA;

}  // namespace

TEST_F(Cli, EvalPerfectSeparation) {
  const auto r = run("eval --scores " + kData + "/perfect_scores.txt --truth " + kData +
                     "/perfect_truth.txt --fpr-max 0.05");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.0\n");
}

TEST_F(Cli, SimulateThenFitIsDeterministic) {
  ASSERT_EQ(run("simulate --dataset 1 --snr 4 --sparsity 1 --n 3000 --seed 3 --output " +
                path("sim.csv")).code, 0);
  const std::string csv = slurp(path("sim.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "value,label");
  // Strip the label column into a txt value file.
  std::istringstream in(csv);
  std::ofstream values(path("values.txt"));
  std::string line;
  std::getline(in, line);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    values << line.substr(0, line.find(',')) << '\n';
    ++n;
  }
  values.close();
  EXPECT_EQ(n, 3000u);
  for (const std::string model : {"bggm", "gim"}) {
    ASSERT_EQ(run("fit --model " + model + " --input " + path("values.txt") + " --seed 9 --output " +
                  path("a.json") + " --gamma-out " + path("g.csv")).code, 0);
    ASSERT_EQ(run("fit --model " + model + " --input " + path("values.txt") + " --seed 9 --output " +
                  path("b.json")).code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    const auto j = nlohmann::json::parse(slurp(path("a.json")));
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["n"], 3000);
    const std::string g = slurp(path("g.csv"));
    EXPECT_EQ(std::count(g.begin(), g.end(), '\n'), 3001);
  }
}

TEST_F(Cli, FitReadsBinaryAndStandardizes) {
  std::ofstream bin(path("x.bin"), std::ios::binary);
  const double vals[] = {-5.1, -0.3, 0.0, 0.2, 0.4, 5.2, 4.8, -0.9, 1.1, -4.6};
  const std::uint64_t count = 10;
  bin.write(reinterpret_cast<const char*>(&count), 8);
  bin.write(reinterpret_cast<const char*>(vals), sizeof vals);
  bin.close();
  ASSERT_EQ(run("fit --model bgim --format f64le --standardize --input " + path("x.bin") +
                " --output " + path("r.json")).code, 0);
  const auto j = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_EQ(j["n"], 9);  // the zero is dropped
  EXPECT_EQ(j["standardized"], true);
}

TEST_F(Cli, BenchWritesEightRowsAndReplays) {
  ASSERT_EQ(run("bench --grid 1:5:1 --repeats 2 --n 1500 --seed 4 --outdir " + path("a")).code, 0);
  const std::string runs = slurp(dir / "a" / "runs.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 9);
  EXPECT_TRUE(fs::exists(dir / "a" / "wins.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "manifest.json"));
  ASSERT_EQ(run("bench --from-manifest " + path("a/manifest.json") + " --outdir " + path("b")).code, 0);
  EXPECT_EQ(runs, slurp(dir / "b" / "runs.csv"));
}

TEST_F(Cli, UsageAndRuntimeErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("fit --model gmm --input x --output y").code, 1);
  EXPECT_EQ(run("fit --model bggm --input x --output y --bogus").code, 1);
  EXPECT_EQ(run("bench --grid nope --outdir " + path("z")).code, 1);
  EXPECT_EQ(run("bench --models bggm,xyz --outdir " + path("z")).code, 1);
  EXPECT_EQ(run("fit --model bggm --input " + path("missing.txt") + " --output " + path("o.json")).code, 2);
  std::ofstream(path("bad.txt")) << "1.0\nnot-a-number\n";
  EXPECT_EQ(run("fit --model bggm --input " + path("bad.txt") + " --output " + path("o.json")).code, 2);
  EXPECT_EQ(run("eval --scores " + kData + "/perfect_scores.txt --truth " + kData + "/small.txt").code, 2);
}
