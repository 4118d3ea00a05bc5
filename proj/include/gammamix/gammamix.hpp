#pragma once

// Everything except json_io.hpp, which additionally needs nlohmann/json.

#include "gammamix/distributions.hpp"
#include "gammamix/errors.hpp"
#include "gammamix/evaluation.hpp"
#include "gammamix/experiments.hpp"
#include "gammamix/initialization.hpp"
#include "gammamix/io.hpp"
#include "gammamix/mixture.hpp"
#include "gammamix/ml_em.hpp"
#include "gammamix/random.hpp"
#include "gammamix/special_functions.hpp"
#include "gammamix/vb_em.hpp"
