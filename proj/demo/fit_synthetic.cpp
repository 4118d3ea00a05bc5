// Fits all four models to one synthetic dataset and prints a summary.
//
//   fit_synthetic [snr] [sparsity]

#include <cstdio>
#include <cstdlib>

#include "gammamix/gammamix.hpp"

namespace gm = gammamix;

int main(int argc, char** argv) {
  const double snr = argc > 1 ? std::atof(argv[1]) : 4.0;
  const int sparsity = argc > 2 ? std::atoi(argv[2]) : 1;
  const auto spec = gm::SyntheticSpec::make(1, snr, sparsity, 10000, 1, 1);
  const auto data = gm::generate(spec, 0);
  const auto truth = data.truth();

  std::printf("%-5s %8s %8s %8s %8s %5s\n", "model", "pi_pos", "pos", "neg", "auc", "iter");
  for (gm::Model m : gm::kAllModels) {
    const auto fit = gm::fit_model(m, data.values, 7);
    const auto frac = gm::activation_fractions(gm::activation_map(fit.gamma));
    const double auc = gm::restricted_auc(fit.gamma, truth);
    std::printf("%-5s %8.4f %8.4f %8.4f %8.4f %5d\n", gm::to_string(m).c_str(), fit.point.pi[1],
                frac.positive, frac.negative, auc, fit.iterations);
  }
  std::printf("true proportions: %.3f %.3f %.3f\n", spec.pi[0], spec.pi[1], spec.pi[2]);
}
