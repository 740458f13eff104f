#include "forge/multichannel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forge/errors.hpp"
#include "forge/solver.hpp"
#include "forge/verify.hpp"

namespace forge {

namespace {

std::vector<SampledField> fields_of(std::span<const Solution> s) {
    std::vector<SampledField> out;
    out.reserve(s.size());
    for (const auto& x : s) out.push_back(x.field);
    return out;
}

void check_shapes(const ChannelSystem& cs) {
    const std::size_t N = cs.channels;
    if (N == 0) throw InvalidArgument("channel system needs at least one channel");
    if (cs.base_potential.size() != N * N) throw InvalidArgument("base potential must be N x N");
    if (cs.seed_solutions.size() != N * N) throw InvalidArgument("seed solution matrix must be N x N");
    if (cs.c.size() != N || cs.gamma_prime_sq.size() != N) {
        throw InvalidArgument("c and gamma'^2 need one entry per channel");
    }
    const RadialGrid& g = cs.weight.grid();
    for (const auto& v : cs.base_potential) require_same_grid(v.grid(), g, "channel base potential");
    for (const auto& s : cs.seed_solutions) require_same_grid(s.field.grid(), g, "channel seed solution");
}

// Common spectral offset gamma_a^2 - gamma'_a^2; throws if it differs between channels.
double common_shift(const ChannelSystem& cs, std::span<const double> gamma_sq) {
    if (gamma_sq.size() != cs.channels) throw InvalidArgument("gamma^2 needs one entry per channel");
    const double shift = gamma_sq[0] - cs.gamma_prime_sq[0];
    for (std::size_t a = 1; a < cs.channels; ++a) {
        const double s = gamma_sq[a] - cs.gamma_prime_sq[a];
        if (std::abs(s - shift) > 1e-10 * (1.0 + std::abs(shift))) {
            throw InvalidArgument("gamma_a^2 - gamma'_a^2 must be the same in every channel (got " +
                                  std::to_string(shift) + " and " + std::to_string(s) + ")");
        }
    }
    return shift;
}

}  // namespace

void validate(const ChannelSystem& cs, const ChannelOptions& opts) {
    check_shapes(cs);
    const std::size_t N = cs.channels;
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            const auto& ab = cs.base_potential[a * N + b];
            const auto& ba = cs.base_potential[b * N + a];
            for (std::size_t i = 0; i < ab.size(); ++i) {
                if (std::abs(ab.value(i) - ba.value(i)) > 1e-12 * (1.0 + std::abs(ab.value(i)))) {
                    throw InvalidArgument("base potential is not symmetric at node " + std::to_string(i));
                }
            }
        }
        for (std::size_t b = 0; b < N; ++b) {
            if (cs.seed_solutions[a * N + b].gamma_sq != cs.gamma_prime_sq[a]) {
                throw InvalidArgument("seed solution row " + std::to_string(a) + " is not at gamma'_a^2");
            }
        }
    }
    const auto fields = fields_of(cs.seed_solutions);
    const ResidualReport rep =
        matrix_residual(cs.base_potential, cs.weight.field(), fields, cs.gamma_prime_sq, opts.seed_tolerance);
    if (!rep.pass) throw ResidualFailure("seed solution matrix does not solve the base system", rep);
}

std::vector<SampledField> seed_vectors(const ChannelSystem& cs) {
    check_shapes(cs);
    const std::size_t N = cs.channels;
    const RadialGrid& g = cs.weight.grid();
    std::vector<SampledField> out;
    out.reserve(N);
    for (std::size_t a = 0; a < N; ++a) {
        std::vector<double> v(g.size(), 0.0), d(g.size(), 0.0);
        for (std::size_t b = 0; b < N; ++b) {
            const auto& f = cs.seed_solutions[a * N + b].field;
            for (std::size_t i = 0; i < g.size(); ++i) {
                v[i] += f.value(i) * cs.c[b];
                d[i] += f.deriv(i) * cs.c[b];
            }
        }
        out.emplace_back(g, std::move(v), std::move(d));
    }
    return out;
}

TransformedSeeds transformed_seed_vectors(const ChannelSystem& cs) {
    const std::vector<SampledField> psi0 = seed_vectors(cs);
    const RadialGrid& g = cs.weight.grid();
    const std::size_t n = g.size();

    std::vector<double> norm(n, 0.0), dnorm(n, 0.0);
    for (const auto& p : psi0) {
        for (std::size_t i = 0; i < n; ++i) {
            norm[i] += cs.weight.value(i) * p.value(i) * p.value(i);
            dnorm[i] += cs.weight.deriv(i) * p.value(i) * p.value(i) + 2.0 * cs.weight.value(i) * p.value(i) * p.deriv(i);
        }
    }
    std::vector<double> D = integrate_from_anchor(norm, dnorm, g.step(), cs.direction);
    for (std::size_t i = 0; i < n; ++i) {
        D[i] += 1.0;
        if (!(D[i] > 0.0)) throw SingularTransform("multichannel denominator D(r) is not positive", i);
    }

    TransformedSeeds out{{}, SampledField(g, D, norm)};
    for (const auto& p : psi0) {
        std::vector<double> v(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = p.value(i) / D[i];
            d[i] = p.deriv(i) / D[i] - p.value(i) * norm[i] / (D[i] * D[i]);
        }
        out.psi.emplace_back(g, std::move(v), std::move(d));
    }
    return out;
}

std::vector<SampledField> multichannel_potential(const ChannelSystem& cs) {
    const std::vector<SampledField> psi0 = seed_vectors(cs);
    const TransformedSeeds t = transformed_seed_vectors(cs);
    const std::size_t N = cs.channels;
    const RadialGrid& g = cs.weight.grid();

    std::vector<SampledField> V;
    V.reserve(N * N);
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
            std::vector<double> v(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double prod = t.psi[a].value(i) * psi0[b].value(i);
                const double dprod = t.psi[a].deriv(i) * psi0[b].value(i) + t.psi[a].value(i) * psi0[b].deriv(i);
                v[i] = cs.base_potential[a * N + b].value(i) - 2.0 * cs.weight.value(i) * dprod -
                       cs.weight.deriv(i) * prod;
            }
            V.push_back(SampledField::from_values(g, std::move(v)));
        }
    }
    return V;
}

double symmetry_defect(std::span<const SampledField> V, std::size_t channels) {
    if (V.size() != channels * channels) throw InvalidArgument("potential must be N x N");
    double worst = 0.0;
    for (std::size_t a = 0; a < channels; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            const auto& ab = V[a * channels + b];
            const auto& ba = V[b * channels + a];
            for (std::size_t i = 0; i < ab.size(); ++i) worst = std::max(worst, std::abs(ab.value(i) - ba.value(i)));
        }
    }
    return worst;
}

std::vector<Solution> multichannel_solution(const ChannelSystem& cs, std::span<const Solution> phi0,
                                            std::span<const double> gamma_sq, SolutionForm form) {
    check_shapes(cs);
    const std::size_t N = cs.channels;
    if (phi0.size() != N * N) throw InvalidArgument("base solution matrix must be N x N");
    const RadialGrid& g = cs.weight.grid();
    const std::size_t n = g.size();
    for (const auto& s : phi0) require_same_grid(s.field.grid(), g, "multichannel_solution");

    const double shift = common_shift(cs, gamma_sq);
    if (form == SolutionForm::Wronskian && std::abs(shift) < 1e-8) {
        throw InvalidArgument("Wronskian form is undefined when gamma_j^2 = gamma'_j^2; use the integral form");
    }

    const std::vector<SampledField> psi0 = seed_vectors(cs);
    const TransformedSeeds t = transformed_seed_vectors(cs);

    std::vector<Solution> out;
    out.reserve(N * N);
    std::vector<std::vector<double>> vals(N * N, std::vector<double>(n)), ders(N * N, std::vector<double>(n));
    std::vector<double> integrand(n), dintegrand(n);
    for (std::size_t b = 0; b < N; ++b) {
        // overlap_b' = h sum_j psi0_j phi0_jb
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0, ds = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                const auto& f = phi0[j * N + b].field;
                s += psi0[j].value(i) * f.value(i);
                ds += psi0[j].deriv(i) * f.value(i) + psi0[j].value(i) * f.deriv(i);
            }
            integrand[i] = cs.weight.value(i) * s;
            dintegrand[i] = cs.weight.deriv(i) * s + cs.weight.value(i) * ds;
        }
        std::vector<double> overlap;
        if (form == SolutionForm::Integral) {
            overlap = integrate_from_anchor(integrand, dintegrand, g.step(), cs.direction);
        } else {
            overlap.assign(n, 0.0);
            for (std::size_t j = 0; j < N; ++j) {
                const double denom = cs.gamma_prime_sq[j] - gamma_sq[j];
                const auto& f = phi0[j * N + b].field;
                for (std::size_t i = 0; i < n; ++i) {
                    overlap[i] += (psi0[j].value(i) * f.deriv(i) - psi0[j].deriv(i) * f.value(i)) / denom;
                }
            }
        }
        for (std::size_t a = 0; a < N; ++a) {
            const auto& base = phi0[a * N + b].field;
            auto& v = vals[a * N + b];
            auto& d = ders[a * N + b];
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = base.value(i) - t.psi[a].value(i) * overlap[i];
                d[i] = base.deriv(i) - t.psi[a].deriv(i) * overlap[i] - t.psi[a].value(i) * integrand[i];
            }
        }
    }
    for (std::size_t k = 0; k < N * N; ++k) {
        out.push_back(Solution{gamma_sq[k / N], SampledField(g, std::move(vals[k]), std::move(ders[k])), phi0[k].bc,
                               std::nullopt});
    }
    return out;
}

std::vector<Solution> diagonal_base_solutions(std::span<const SampledField> V0, const Weight& h,
                                              std::span<const double> gamma_sq,
                                              std::span<const BoundaryCondition> bc) {
    const std::size_t N = gamma_sq.size();
    if (V0.size() != N * N || bc.size() != N) throw InvalidArgument("diagonal_base_solutions: size mismatch");
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
            if (a == b) continue;
            const auto vals = V0[a * N + b].values();
            if (std::any_of(vals.begin(), vals.end(), [](double v) { return v != 0.0; })) {
                throw InvalidArgument("base potential is coupled; supply the base solution matrix explicitly");
            }
        }
    }
    const RadialGrid& g = h.grid();
    std::vector<Solution> out;
    out.reserve(N * N);
    for (std::size_t a = 0; a < N; ++a) {
        Solution diag = solve(V0[a * N + a], h.field(), gamma_sq[a], bc[a]);
        for (std::size_t b = 0; b < N; ++b) {
            if (a == b) {
                out.push_back(diag);
            } else {
                out.push_back(Solution{gamma_sq[a], SampledField::constant(g, 0.0), bc[a], std::nullopt});
            }
        }
    }
    return out;
}

std::vector<Solution> multichannel_solution(const ChannelSystem& cs, std::span<const double> gamma_sq,
                                            SolutionForm form) {
    check_shapes(cs);
    std::vector<BoundaryCondition> bc;
    for (std::size_t a = 0; a < cs.channels; ++a) bc.push_back(cs.seed_solutions[a * cs.channels + a].bc);
    const auto phi0 = diagonal_base_solutions(cs.base_potential, cs.weight, gamma_sq, bc);
    return multichannel_solution(cs, phi0, gamma_sq, form);
}

}  // namespace forge
