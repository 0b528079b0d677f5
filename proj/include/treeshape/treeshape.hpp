#pragma once

#include "treeshape/enumerate.hpp"
#include "treeshape/errors.hpp"
#include "treeshape/exact.hpp"
#include "treeshape/json_io.hpp"
#include "treeshape/limits.hpp"
#include "treeshape/models.hpp"
#include "treeshape/montecarlo.hpp"
#include "treeshape/newick.hpp"
#include "treeshape/rational.hpp"
#include "treeshape/rng.hpp"
#include "treeshape/statistics.hpp"
#include "treeshape/tree.hpp"

namespace treeshape {
inline constexpr const char* kVersion = "0.1.0";
}
