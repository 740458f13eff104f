#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace forge {

/// Uniform grid of `n` nodes on [a, b]. The last node is exactly `b`.
class RadialGrid {
public:
    /// Requires a < b and n >= 3; throws InvalidArgument otherwise.
    RadialGrid(double a, double b, std::size_t n);

    /// Grid on [a, b] whose step is the closest uniform step to `step`.
    static RadialGrid with_step(double a, double b, double step);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return n_; }

    double node(std::size_t i) const noexcept { return i + 1 == n_ ? b_ : a_ + static_cast<double>(i) * step_; }
    std::vector<double> nodes() const;

    bool operator==(const RadialGrid& other) const noexcept {
        return a_ == other.a_ && b_ == other.b_ && n_ == other.n_;
    }

private:
    double a_;
    double b_;
    std::size_t n_;
    double step_;
};

/// Function values and first derivatives sampled on a RadialGrid.
/// Every entry is finite; construction throws DomainError naming the first bad node.
class SampledField {
public:
    SampledField(const RadialGrid& grid, std::vector<double> values, std::vector<double> derivs);

    static SampledField constant(const RadialGrid& grid, double value);

    /// Builds a field whose derivative channel is obtained by fourth-order
    /// finite differences of `values`. Only for quantities with no closed-form
    /// derivative (constructed potentials); transforms never read it back.
    static SampledField from_values(const RadialGrid& grid, std::vector<double> values);

    const RadialGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> derivs() const noexcept { return derivs_; }
    double value(std::size_t i) const noexcept { return values_[i]; }
    double deriv(std::size_t i) const noexcept { return derivs_[i]; }

private:
    RadialGrid grid_;
    std::vector<double> values_;
    std::vector<double> derivs_;
};

/// Which end of the interval cumulative integrals are anchored at.
/// FromLeft pairs with regular solutions, FromRight with Jost-type ones.
enum class Direction { FromLeft, FromRight };

std::string_view to_string(Direction d);

/// Throws GridMismatch if the two grids differ.
void require_same_grid(const RadialGrid& lhs, const RadialGrid& rhs, std::string_view context);

/// W{f, g} = f g' - f' g at every node, from the carried derivatives.
/// The derivative channel of the result is differenced (see from_values).
SampledField wronskian(const SampledField& f, const SampledField& g);

/// Cumulative integral of `f`: the integral from a to r (FromLeft) or from r
/// to b (FromRight). Each panel uses the endpoint-corrected trapezoid rule
///   h/2 (f0 + f1) + h^2/12 (f0' - f1'),
/// which is fourth order and, being the same rule on every panel, leaves a
/// smooth error with no even/odd node alternation. The derivative channel of
/// the result is exact: f for FromLeft, -f for FromRight.
SampledField integrate_prefix(const SampledField& f, Direction direction);

/// Same quadrature on raw samples `f` with derivatives `df`.
std::vector<double> integrate_prefix(std::span<const double> f, std::span<const double> df, double step,
                                     Direction direction);

/// Integral from the anchor endpoint to r: integrate_prefix for FromLeft, and
/// minus integrate_prefix for FromRight (the integral from b to r). With this
/// orientation d/dr of the result is +f in both directions.
std::vector<double> integrate_from_anchor(std::span<const double> f, std::span<const double> df, double step,
                                          Direction direction);

/// Integral of `f` over the whole grid.
double integrate(const SampledField& f);

}  // namespace forge
