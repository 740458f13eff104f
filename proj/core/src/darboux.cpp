#include "forge/darboux.hpp"

#include <cmath>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

namespace {

void require_nodeless(const SampledField& y, double eps) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(y.value(i)) < eps) throw SingularTransform("seed vanishes; Darboux potential is singular", i);
        if (i > 0 && std::signbit(y.value(i)) != std::signbit(y.value(i - 1))) {
            const std::size_t k = std::abs(y.value(i)) < std::abs(y.value(i - 1)) ? i : i - 1;
            throw SingularTransform("seed changes sign; Darboux potential is singular", k);
        }
    }
}

double seed_curvature(const Solution& seed, const Weight& h, const SampledField& V0, std::size_t i) {
    if (seed.curvature) return (*seed.curvature)[i];
    return (V0.value(i) - seed.gamma_sq * h.value(i)) * seed.field.value(i);
}

}  // namespace

SampledField darboux_potential(const Solution& seed, const Weight& h, const SampledField& V0,
                               const DarbouxOptions& opts) {
    const RadialGrid& grid = seed.field.grid();
    require_same_grid(h.grid(), grid, "darboux_potential");
    require_same_grid(V0.grid(), grid, "darboux_potential");
    require_nodeless(seed.field, opts.node_epsilon);

    std::vector<double> V(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = seed.field.value(i);
        const double L = seed.field.deriv(i) / y;  // (ln y0)'
        const double dL = seed_curvature(seed, h, V0, i) / y - L * L;
        const double lh = h.deriv(i) / h.value(i);  // (ln h)'
        const double sqrt_h_term = 0.75 * lh * lh - 0.5 * h.second(i) / h.value(i);  // sqrt(h) (1/sqrt(h))''
        V[i] = V0.value(i) - 2.0 * dL + lh * L + sqrt_h_term;
    }
    return SampledField::from_values(grid, std::move(V));
}

DarbouxTransform make_darboux(const Solution& seed, const Weight& h, const SampledField& V0,
                              const DarbouxOptions& opts) {
    SampledField V = darboux_potential(seed, h, V0, opts);
    return DarbouxTransform{seed, h, V0, std::move(V)};
}

Solution darboux_solution(const Solution& seed, const Weight& h, const Solution& phi0, const DarbouxOptions& opts) {
    const RadialGrid& grid = seed.field.grid();
    require_same_grid(h.grid(), grid, "darboux_solution");
    require_same_grid(phi0.field.grid(), grid, "darboux_solution");
    require_nodeless(seed.field, opts.node_epsilon);

    const double shift = seed.gamma_sq - phi0.gamma_sq;
    std::vector<double> phi(grid.size()), dphi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = seed.field.value(i);
        const double dy = seed.field.deriv(i);
        const double p = phi0.field.value(i);
        const double dp = phi0.field.deriv(i);
        const double hv = h.value(i);
        const double sqrt_h = std::sqrt(hv);

        const double w = y * dp - dy * p;
        const double dw = hv * shift * y * p;
        phi[i] = w / (sqrt_h * y);
        dphi[i] = dw / (sqrt_h * y) - phi[i] * (0.5 * h.deriv(i) / hv + dy / y);
    }
    CustomBoundary bc{phi[0], dphi[0], Endpoint::Left};
    return Solution{phi0.gamma_sq, SampledField(grid, std::move(phi), std::move(dphi)), bc, std::nullopt};
}

Solution darboux_solution(const DarbouxTransform& t, const Solution& phi0) {
    return darboux_solution(t.seed, t.weight, phi0);
}

// ---------------------------------------------------------------------------

DarbouxChain::DarbouxChain(Solution seed, Weight weight, SampledField normalization, SampledField potential,
                           double coupling, Direction direction)
    : seed_(std::move(seed)),
      weight_(std::move(weight)),
      normalization_(std::move(normalization)),
      potential_(std::move(potential)),
      coupling_(coupling),
      direction_(direction) {}

DarbouxChain chain_second_step(const Solution& seed, const Weight& h, const SampledField& V0, double C,
                               Direction direction) {
    const RadialGrid& grid = seed.field.grid();
    require_same_grid(h.grid(), grid, "chain_second_step");
    require_same_grid(V0.grid(), grid, "chain_second_step");
    const std::size_t n = grid.size();

    const auto& y = seed.field;
    std::vector<double> weighted(n), dweighted(n);
    for (std::size_t i = 0; i < n; ++i) {
        weighted[i] = h.value(i) * y.value(i) * y.value(i);
        dweighted[i] = h.deriv(i) * y.value(i) * y.value(i) + 2.0 * h.value(i) * y.value(i) * y.deriv(i);
    }
    const std::vector<double> integral = integrate_from_anchor(weighted, dweighted, grid.step(), direction);

    std::vector<double> P(n), dP(n), V(n);
    for (std::size_t i = 0; i < n; ++i) {
        P[i] = 1.0 + C * integral[i];
        if (!(P[i] > 0.0)) throw SingularTransform("chained normalization P(r) is not positive", i);
        dP[i] = C * weighted[i];
        const double y = seed.field.value(i);
        const double d2P = C * (h.deriv(i) * y * y + 2.0 * h.value(i) * y * seed.field.deriv(i));
        const double G = dP[i] / P[i];  // (ln P)'
        const double dG = d2P / P[i] - G * G;
        V[i] = V0.value(i) - 2.0 * dG + h.deriv(i) / h.value(i) * G;
    }
    return DarbouxChain(seed, h, SampledField(grid, std::move(P), std::move(dP)),
                        SampledField::from_values(grid, std::move(V)), C, direction);
}

DarbouxChain chain_second_step(const DarbouxTransform& first, double C, Direction direction) {
    return chain_second_step(first.seed, first.weight, first.base_potential, C, direction);
}

Solution DarbouxChain::solution(const Solution& phi0) const {
    const RadialGrid& grid = seed_.field.grid();
    require_same_grid(phi0.field.grid(), grid, "DarbouxChain::solution");
    const double shift = seed_.gamma_sq - phi0.gamma_sq;
    if (std::abs(shift) < 1e-8) {
        throw InvalidArgument("chained solution map is undefined at the seed's own gamma^2");
    }

    std::vector<double> phi(grid.size()), dphi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = seed_.field.value(i);
        const double dy = seed_.field.deriv(i);
        const double p = phi0.field.value(i);
        const double dp = phi0.field.deriv(i);
        const double P = normalization_.value(i);
        const double dP = normalization_.deriv(i);

        const double w = y * dp - dy * p;
        const double dw = weight_.value(i) * shift * y * p;
        const double k = coupling_ / shift;
        const double num = y * w;
        const double dnum = dy * w + y * dw;
        phi[i] = p - k * num / P;
        dphi[i] = dp - k * (dnum / P - num * dP / (P * P));
    }
    return Solution{phi0.gamma_sq, SampledField(grid, std::move(phi), std::move(dphi)), phi0.bc, std::nullopt};
}

}  // namespace forge
