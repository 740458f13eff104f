#pragma once

#include <string_view>

#include "forge/solution.hpp"

namespace forge {

/// Integrates -phi'' + V phi = gamma_sq h phi across the grid with classical
/// RK4 on (phi, phi'), starting from the endpoint named by `bc`. Midpoint
/// values of V and h come from cubic Hermite interpolation of the carried
/// derivatives, so the scheme stays fourth order.
///
/// Throws DomainError if h <= 0 at a node, if the solution overflows, or if a
/// JostAtRight condition is requested where V(b) - gamma_sq h(b) <= 0.
Solution solve(const SampledField& V, const SampledField& h, double gamma_sq, const BoundaryCondition& bc);

struct SeedOptions {
    /// Relative residual (see verify.hpp) above which a seed is rejected.
    double tolerance = 1e-6;
};

/// Samples an analytic seed y(r) and accepts it only if it solves the base
/// problem (V0, h) at gamma_sq to `opts.tolerance`. The boundary tag records
/// y(a), y'(a). Throws ResidualFailure carrying the report on rejection.
Solution seed_from_expression(std::string_view y_text, const RadialGrid& grid, const SampledField& V0,
                              const Weight& h, double gamma_sq, const SeedOptions& opts = {});

Solution seed_from_expression(const AnalyticExpr& y, const RadialGrid& grid, const SampledField& V0,
                              const Weight& h, double gamma_sq, const SeedOptions& opts = {});

}  // namespace forge
