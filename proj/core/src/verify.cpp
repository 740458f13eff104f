#include "forge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace forge {

namespace {

constexpr std::size_t kMinNodes = 7;

void require_min_nodes(const RadialGrid& g) {
    if (g.size() < kMinNodes) throw InvalidArgument("residual check needs at least 7 grid nodes");
}

double second_difference(std::span<const double> f, std::size_t i, double h) {
    return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
}

ResidualReport finish(double max_abs, std::size_t argmax, double scale, double tol) {
    ResidualReport rep;
    rep.max_abs = max_abs;
    rep.max_rel = max_abs / (scale + 1.0);
    rep.argmax_node = argmax;
    rep.tolerance = tol;
    rep.pass = rep.max_rel <= tol;
    return rep;
}

}  // namespace

ResidualReport residual(const SampledField& V, const SampledField& h, const SampledField& phi, double gamma_sq,
                        double tol) {
    require_same_grid(V.grid(), phi.grid(), "residual");
    require_same_grid(h.grid(), phi.grid(), "residual");
    require_min_nodes(phi.grid());

    const auto f = phi.values();
    const double step = phi.grid().step();
    const std::size_t n = f.size();

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(gamma_sq * h.value(i) * f[i]));

    double max_abs = 0.0;
    std::size_t argmax = 2;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double res = -second_difference(f, i, step) + (V.value(i) - gamma_sq * h.value(i)) * f[i];
        if (std::abs(res) > max_abs) {
            max_abs = std::abs(res);
            argmax = i;
        }
    }
    return finish(max_abs, argmax, scale, tol);
}

ResidualReport residual(const SampledField& V, const SampledField& h, const Solution& phi, double tol) {
    return residual(V, h, phi.field, phi.gamma_sq, tol);
}

ResidualReport matrix_residual(std::span<const SampledField> V, const SampledField& h,
                               std::span<const SampledField> phi, std::span<const double> gamma_sq, double tol) {
    const std::size_t N = gamma_sq.size();
    if (N == 0 || V.size() != N * N) throw InvalidArgument("matrix_residual: potential must be N x N");
    if (phi.empty() || phi.size() % N != 0) throw InvalidArgument("matrix_residual: solution must be N x K");
    const std::size_t K = phi.size() / N;

    const RadialGrid& grid = h.grid();
    require_min_nodes(grid);
    for (const auto& v : V) require_same_grid(v.grid(), grid, "matrix_residual");
    for (const auto& p : phi) require_same_grid(p.grid(), grid, "matrix_residual");

    const std::size_t n = grid.size();
    const double step = grid.step();

    double scale = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < K; ++b) {
            const auto f = phi[a * K + b].values();
            for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(gamma_sq[a] * h.value(i) * f[i]));
        }
    }

    double max_abs = 0.0;
    std::size_t argmax = 2;
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < K; ++b) {
            const auto f = phi[a * K + b].values();
            for (std::size_t i = 2; i + 2 < n; ++i) {
                double res = -second_difference(f, i, step) - gamma_sq[a] * h.value(i) * f[i];
                for (std::size_t k = 0; k < N; ++k) res += V[a * N + k].value(i) * phi[k * K + b].value(i);
                if (std::abs(res) > max_abs) {
                    max_abs = std::abs(res);
                    argmax = i;
                }
            }
        }
    }
    return finish(max_abs, argmax, scale, tol);
}

ResidualReport check_wronskian_integral(const Solution& phi_mu, const Solution& phi, const SampledField& h,
                                        Direction direction, double tol) {
    require_same_grid(phi_mu.field.grid(), phi.field.grid(), "check_wronskian_integral");
    require_same_grid(h.grid(), phi.field.grid(), "check_wronskian_integral");

    const auto& f = phi_mu.field;
    const auto& g = phi.field;
    const std::size_t n = g.size();

    std::vector<double> integrand(n), dintegrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        integrand[i] = h.value(i) * f.value(i) * g.value(i);
        dintegrand[i] = h.deriv(i) * f.value(i) * g.value(i) +
                        h.value(i) * (f.deriv(i) * g.value(i) + f.value(i) * g.deriv(i));
    }
    const std::vector<double> integral = integrate_from_anchor(integrand, dintegrand, g.grid().step(), direction);
    const double shift = phi_mu.gamma_sq - phi.gamma_sq;

    double scale = 0.0;
    double max_abs = 0.0;
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = f.value(i) * g.deriv(i) - f.deriv(i) * g.value(i);
        scale = std::max(scale, std::abs(w));
        const double diff = std::abs(w - shift * integral[i]);
        if (diff > max_abs) {
            max_abs = diff;
            argmax = i;
        }
    }
    return finish(max_abs, argmax, scale, tol);
}

}  // namespace forge
