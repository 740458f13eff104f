#pragma once

#include "forge/bargmann.hpp"
#include "forge/darboux.hpp"
#include "forge/errors.hpp"
#include "forge/expr.hpp"
#include "forge/grid.hpp"
#include "forge/multichannel.hpp"
#include "forge/solution.hpp"
#include "forge/solver.hpp"
#include "forge/verify.hpp"

namespace forge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace forge
