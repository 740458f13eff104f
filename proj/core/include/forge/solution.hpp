#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "forge/expr.hpp"
#include "forge/grid.hpp"

namespace forge {

enum class Endpoint { Left, Right };

/// phi(a) = 0, phi'(a) = 1.
struct RegularAtLeft {};

/// Decaying solution fixed at the right endpoint:
/// phi(b) = exp(-kappa (b - a)), phi'(b) = -kappa phi(b), kappa = sqrt(V(b) - gamma^2 h(b)).
struct JostAtRight {};

/// phi = value, phi' = slope at the chosen endpoint.
struct CustomBoundary {
    double value = 0.0;
    double slope = 0.0;
    Endpoint at = Endpoint::Left;
};

using BoundaryCondition = std::variant<RegularAtLeft, JostAtRight, CustomBoundary>;

std::string describe(const BoundaryCondition& bc);

/// A solution of -phi'' + V phi = gamma^2 h phi sampled on a grid.
struct Solution {
    double gamma_sq = 0.0;
    SampledField field;
    BoundaryCondition bc;
    /// Exact phi'' when it is known in closed form (expression seeds).
    std::optional<std::vector<double>> curvature;
};

/// Weight function h(r) sampled with exact first and second derivatives.
class Weight {
public:
    /// Throws DomainError naming the first node where h <= 0 or evaluation fails.
    Weight(const AnalyticExpr& h, const RadialGrid& grid);

    const AnalyticExpr& expr() const noexcept { return expr_; }
    const SampledField& field() const noexcept { return field_; }
    const RadialGrid& grid() const noexcept { return field_.grid(); }
    double value(std::size_t i) const noexcept { return field_.value(i); }
    double deriv(std::size_t i) const noexcept { return field_.deriv(i); }
    double second(std::size_t i) const noexcept { return second_[i]; }

private:
    AnalyticExpr expr_;
    SampledField field_;
    std::vector<double> second_;
};

}  // namespace forge
