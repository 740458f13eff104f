#include "forge/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forge/errors.hpp"

namespace forge {

RadialGrid::RadialGrid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), step_(0.0) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw InvalidArgument("grid requires finite a < b");
    }
    if (n < 3) throw InvalidArgument("grid requires at least 3 nodes");
    step_ = (b - a) / static_cast<double>(n - 1);
}

RadialGrid RadialGrid::with_step(double a, double b, double step) {
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
    const auto panels = static_cast<std::size_t>(std::llround((b - a) / step));
    return RadialGrid(a, b, std::max<std::size_t>(panels, 2) + 1);
}

std::vector<double> RadialGrid::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
    return out;
}

SampledField::SampledField(const RadialGrid& grid, std::vector<double> values, std::vector<double> derivs)
    : grid_(grid), values_(std::move(values)), derivs_(std::move(derivs)) {
    if (values_.size() != grid_.size() || derivs_.size() != grid_.size()) {
        throw GridMismatch("field length " + std::to_string(values_.size()) + "/" + std::to_string(derivs_.size()) +
                           " does not match grid size " + std::to_string(grid_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || !std::isfinite(derivs_[i])) {
            throw DomainError("non-finite field entry", i);
        }
    }
}

SampledField SampledField::constant(const RadialGrid& grid, double value) {
    return SampledField(grid, std::vector<double>(grid.size(), value), std::vector<double>(grid.size(), 0.0));
}

SampledField SampledField::from_values(const RadialGrid& grid, std::vector<double> values) {
    const std::size_t n = values.size();
    if (n != grid.size()) throw GridMismatch("value count does not match grid size");
    const double h = grid.step();
    std::vector<double> d(n, 0.0);
    const auto& f = values;
    if (n >= 5) {
        for (std::size_t i = 2; i + 2 < n; ++i) {
            d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
        }
        // one-sided fourth-order stencils at the two nodes nearest each end
        d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
        d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
        d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
        d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
    } else {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    }
    return SampledField(grid, std::move(values), std::move(d));
}

std::string_view to_string(Direction d) { return d == Direction::FromLeft ? "from_left" : "from_right"; }

void require_same_grid(const RadialGrid& lhs, const RadialGrid& rhs, std::string_view context) {
    if (!(lhs == rhs)) {
        throw GridMismatch(std::string(context) + ": grids differ ([" + std::to_string(lhs.a()) + ", " +
                           std::to_string(lhs.b()) + "] x " + std::to_string(lhs.size()) + " vs [" +
                           std::to_string(rhs.a()) + ", " + std::to_string(rhs.b()) + "] x " +
                           std::to_string(rhs.size()) + ")");
    }
}

SampledField wronskian(const SampledField& f, const SampledField& g) {
    require_same_grid(f.grid(), g.grid(), "wronskian");
    std::vector<double> w(f.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = f.value(i) * g.deriv(i) - f.deriv(i) * g.value(i);
    return SampledField::from_values(f.grid(), std::move(w));
}

std::vector<double> integrate_prefix(std::span<const double> f, std::span<const double> df, double step,
                                     Direction direction) {
    const std::size_t n = f.size();
    if (df.size() != n) throw GridMismatch("integrand and derivative lengths differ");
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    const double half = 0.5 * step;
    const double corr = step * step / 12.0;
    if (direction == Direction::FromLeft) {
        for (std::size_t i = 1; i < n; ++i) {
            out[i] = out[i - 1] + half * (f[i - 1] + f[i]) + corr * (df[i - 1] - df[i]);
        }
    } else {
        for (std::size_t i = n - 1; i > 0; --i) {
            out[i - 1] = out[i] + half * (f[i - 1] + f[i]) + corr * (df[i - 1] - df[i]);
        }
    }
    return out;
}

std::vector<double> integrate_from_anchor(std::span<const double> f, std::span<const double> df, double step,
                                          Direction direction) {
    std::vector<double> out = integrate_prefix(f, df, step, direction);
    if (direction == Direction::FromRight) {
        for (double& v : out) v = -v;
    }
    return out;
}

SampledField integrate_prefix(const SampledField& f, Direction direction) {
    std::vector<double> values = integrate_prefix(f.values(), f.derivs(), f.grid().step(), direction);
    std::vector<double> derivs(f.values().begin(), f.values().end());
    if (direction == Direction::FromRight) {
        for (double& d : derivs) d = -d;
    }
    return SampledField(f.grid(), std::move(values), std::move(derivs));
}

double integrate(const SampledField& f) {
    return integrate_prefix(f.values(), f.derivs(), f.grid().step(), Direction::FromLeft).back();
}

}  // namespace forge
