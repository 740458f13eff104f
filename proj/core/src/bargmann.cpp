#include "forge/bargmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forge/errors.hpp"

namespace forge {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

bool is_regular(const BoundaryCondition& bc) { return std::holds_alternative<RegularAtLeft>(bc); }
bool is_jost(const BoundaryCondition& bc) { return std::holds_alternative<JostAtRight>(bc); }

void check_class(const BoundaryCondition& bc, Direction direction, const std::string& what) {
    if (is_regular(bc) && direction == Direction::FromRight) {
        throw InvalidArgument(what + " is a regular solution but the direction is from_right");
    }
    if (is_jost(bc) && direction == Direction::FromLeft) {
        throw InvalidArgument(what + " is a Jost-type solution but the direction is from_left");
    }
}

// The integral representation of W{f, g} anchored at one endpoint requires W
// to vanish there; otherwise f and g are not in the same boundary class.
void check_anchor(const SampledField& f, const SampledField& g, Direction direction, double tol,
                  const std::string& what) {
    double scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        scale = std::max(scale, std::abs(f.value(i) * g.deriv(i) - f.deriv(i) * g.value(i)));
    }
    const std::size_t k = direction == Direction::FromLeft ? 0 : f.size() - 1;
    const double w = f.value(k) * g.deriv(k) - f.deriv(k) * g.value(k);
    if (std::abs(w) > tol * (1.0 + scale)) {
        throw InvalidArgument(what + ": Wronskian does not vanish at the " +
                              (direction == Direction::FromLeft ? std::string("left") : std::string("right")) +
                              " endpoint; solutions belong to a different boundary class than " +
                              std::string(to_string(direction)));
    }
}

void validate_seeds(std::span<const BargmannSeed> seeds, const Weight& h, Direction direction,
                    const BargmannOptions& opts) {
    const std::size_t M = seeds.size();
    if (M == 0) throw InvalidArgument("Bargmann transform needs at least one seed");
    if (M > opts.max_seeds) {
        throw InvalidArgument("Bargmann seed count " + std::to_string(M) + " exceeds the configured maximum " +
                              std::to_string(opts.max_seeds));
    }
    bool any_regular = false;
    bool any_jost = false;
    for (std::size_t mu = 0; mu < M; ++mu) {
        require_same_grid(seeds[mu].phi0.field.grid(), h.grid(), "Bargmann seed");
        check_class(seeds[mu].phi0.bc, direction, "seed " + std::to_string(mu));
        any_regular = any_regular || is_regular(seeds[mu].phi0.bc);
        any_jost = any_jost || is_jost(seeds[mu].phi0.bc);
        for (std::size_t nu = 0; nu < mu; ++nu) {
            if (std::abs(seeds[mu].phi0.gamma_sq - seeds[nu].phi0.gamma_sq) < opts.duplicate_gap) {
                throw InvalidArgument("seeds " + std::to_string(nu) + " and " + std::to_string(mu) +
                                      " share gamma^2 = " + std::to_string(seeds[mu].phi0.gamma_sq));
            }
            check_anchor(seeds[mu].phi0.field, seeds[nu].phi0.field, direction, opts.anchor_tolerance,
                         "seeds " + std::to_string(nu) + " and " + std::to_string(mu));
        }
    }
    if (any_regular && any_jost) throw InvalidArgument("seed set mixes regular and Jost-type solutions");
}

struct NodeState {
    VectorXd phi;
    VectorXd dphi;
    VectorXd coupling;
};

NodeState node_state(std::span<const BargmannSeed> seeds, std::size_t i) {
    const auto M = static_cast<Eigen::Index>(seeds.size());
    NodeState s{VectorXd(M), VectorXd(M), VectorXd(M)};
    for (Eigen::Index mu = 0; mu < M; ++mu) {
        const auto& f = seeds[static_cast<std::size_t>(mu)].phi0.field;
        s.phi(mu) = f.value(i);
        s.dphi(mu) = f.deriv(i);
        s.coupling(mu) = seeds[static_cast<std::size_t>(mu)].C;
    }
    return s;
}

void require_matching(std::span<const BargmannSeed> seeds, const PMatrix& pm, const Weight& h) {
    if (seeds.size() != pm.order()) throw InvalidArgument("P-matrix order does not match the seed count");
    if (pm.nodes() != h.grid().size()) throw GridMismatch("P-matrix grid does not match the weight grid");
}

}  // namespace

Eigen::MatrixXd PMatrix::value(std::size_t node) const {
    const auto M = static_cast<Eigen::Index>(order_);
    return Eigen::Map<const MatrixXd>(entries_.data() + node * order_ * order_, M, M);
}

Eigen::MatrixXd PMatrix::derivative(std::size_t node) const {
    const auto M = static_cast<Eigen::Index>(order_);
    return Eigen::Map<const MatrixXd>(derivs_.data() + node * order_ * order_, M, M);
}

double PMatrix::min_abs_determinant() const noexcept {
    double m = std::abs(det_.front());
    for (double d : det_) m = std::min(m, std::abs(d));
    return m;
}

double PMatrix::max_abs_determinant() const noexcept {
    double m = 0.0;
    for (double d : det_) m = std::max(m, std::abs(d));
    return m;
}

double PMatrix::max_condition() const noexcept { return *std::max_element(cond_.begin(), cond_.end()); }

PMatrix p_matrix(std::span<const BargmannSeed> seeds, const Weight& h, Direction direction,
                 const BargmannOptions& opts) {
    validate_seeds(seeds, h, direction, opts);
    const std::size_t M = seeds.size();
    const RadialGrid& grid = h.grid();
    const std::size_t n = grid.size();

    // integral of h phi_mu phi_nu from the anchor, for every pair (mu <= nu)
    std::vector<std::vector<double>> integrals(M * M);
    std::vector<double> integrand(n), dintegrand(n);
    for (std::size_t mu = 0; mu < M; ++mu) {
        for (std::size_t nu = mu; nu < M; ++nu) {
            const auto& f = seeds[mu].phi0.field;
            const auto& g = seeds[nu].phi0.field;
            for (std::size_t i = 0; i < n; ++i) {
                integrand[i] = h.value(i) * f.value(i) * g.value(i);
                dintegrand[i] = h.deriv(i) * f.value(i) * g.value(i) +
                                h.value(i) * (f.deriv(i) * g.value(i) + f.value(i) * g.deriv(i));
            }
            integrals[mu * M + nu] = integrate_from_anchor(integrand, dintegrand, grid.step(), direction);
        }
    }

    PMatrix pm;
    pm.order_ = M;
    pm.direction_ = direction;
    pm.entries_.resize(n * M * M);
    pm.derivs_.resize(n * M * M);
    pm.det_.resize(n);
    pm.cond_.resize(n);

    const auto Mi = static_cast<Eigen::Index>(M);
    double sign = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Map<MatrixXd> P(pm.entries_.data() + i * M * M, Mi, Mi);
        Eigen::Map<MatrixXd> dP(pm.derivs_.data() + i * M * M, Mi, Mi);
        for (std::size_t mu = 0; mu < M; ++mu) {
            const auto& f = seeds[mu].phi0.field;
            const double C = seeds[mu].C;
            for (std::size_t nu = 0; nu < M; ++nu) {
                const auto& g = seeds[nu].phi0.field;
                const auto a = static_cast<Eigen::Index>(mu);
                const auto b = static_cast<Eigen::Index>(nu);
                const double quad = integrals[std::min(mu, nu) * M + std::max(mu, nu)][i];
                if (mu == nu) {
                    P(a, b) = 1.0 + C * quad;
                } else {
                    const double w = f.value(i) * g.deriv(i) - f.deriv(i) * g.value(i);
                    const double kernel = w / (seeds[mu].phi0.gamma_sq - seeds[nu].phi0.gamma_sq);
                    P(a, b) = C * kernel;
                    pm.quadrature_gap_ =
                        std::max(pm.quadrature_gap_, std::abs(C * (kernel - quad)) / (1.0 + std::abs(P(a, b))));
                }
                dP(a, b) = C * h.value(i) * f.value(i) * g.value(i);
            }
        }

        Eigen::PartialPivLU<MatrixXd> lu(P);
        const double det = lu.determinant();
        if (!std::isfinite(det) || det == 0.0) throw SingularTransform("det P vanishes", i);
        if (sign == 0.0) {
            sign = det > 0.0 ? 1.0 : -1.0;
        } else if (det * sign < 0.0) {
            throw SingularTransform("det P changes sign; Bargmann potential is singular", i);
        }
        pm.det_[i] = det;
        const MatrixXd inv = lu.inverse();
        pm.cond_[i] = P.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
    }
    return pm;
}

SampledField bargmann_potential(std::span<const BargmannSeed> seeds, const PMatrix& pm, const Weight& h,
                                const SampledField& V0) {
    require_matching(seeds, pm, h);
    require_same_grid(V0.grid(), h.grid(), "bargmann_potential");
    const std::size_t n = h.grid().size();

    std::vector<double> V(n);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeState s = node_state(seeds, i);
        const double hv = h.value(i);
        const double dh = h.deriv(i);
        const MatrixXd P = pm.value(i);
        const MatrixXd outer = s.phi * s.phi.transpose();
        const MatrixXd cross = s.dphi * s.phi.transpose();
        const MatrixXd dP = s.coupling.asDiagonal() * (hv * outer);
        const MatrixXd d2P = s.coupling.asDiagonal() * (dh * outer + hv * (cross + cross.transpose()));

        Eigen::PartialPivLU<MatrixXd> lu(P);
        const MatrixXd X = lu.solve(dP);
        const double G = X.trace();  // (ln det P)'
        const double dG = lu.solve(d2P).trace() - (X * X).trace();
        V[i] = V0.value(i) - 2.0 * dG + dh / hv * G;
    }
    return SampledField::from_values(h.grid(), std::move(V));
}

SampledField bargmann_potential(std::span<const BargmannSeed> seeds, const Weight& h, const SampledField& V0,
                                Direction direction, const BargmannOptions& opts) {
    return bargmann_potential(seeds, p_matrix(seeds, h, direction, opts), h, V0);
}

Solution bargmann_solution(std::span<const BargmannSeed> seeds, const PMatrix& pm, const Weight& h,
                           const Solution& phi0, const BargmannOptions& opts) {
    require_matching(seeds, pm, h);
    require_same_grid(phi0.field.grid(), h.grid(), "bargmann_solution");
    const std::size_t M = seeds.size();
    const std::size_t n = h.grid().size();
    const Direction direction = pm.direction();

    check_class(phi0.bc, direction, "solution");
    for (std::size_t mu = 0; mu < M; ++mu) {
        if (std::abs(seeds[mu].phi0.gamma_sq - phi0.gamma_sq) < opts.duplicate_gap) {
            throw InvalidArgument("gamma^2 = " + std::to_string(phi0.gamma_sq) + " coincides with seed " +
                                  std::to_string(mu) + "; use transformed_seed_solutions");
        }
        check_anchor(seeds[mu].phi0.field, phi0.field, direction, opts.anchor_tolerance,
                     "seed " + std::to_string(mu) + " and solution");
    }

    // I_mu(r) = W{phi_mu, phi0} / (gamma_mu^2 - gamma^2) in integral form
    std::vector<std::vector<double>> I(M);
    std::vector<double> integrand(n), dintegrand(n);
    const auto& g = phi0.field;
    for (std::size_t mu = 0; mu < M; ++mu) {
        const auto& f = seeds[mu].phi0.field;
        for (std::size_t i = 0; i < n; ++i) {
            integrand[i] = h.value(i) * f.value(i) * g.value(i);
            dintegrand[i] = h.deriv(i) * f.value(i) * g.value(i) +
                            h.value(i) * (f.deriv(i) * g.value(i) + f.value(i) * g.deriv(i));
        }
        I[mu] = integrate_from_anchor(integrand, dintegrand, h.grid().step(), direction);
    }

    std::vector<double> phi(n), dphi(n);
    VectorXd Ivec(static_cast<Eigen::Index>(M));
    VectorXd dIvec(static_cast<Eigen::Index>(M));
    for (std::size_t i = 0; i < n; ++i) {
        const NodeState s = node_state(seeds, i);
        const double hv = h.value(i);
        const double p = phi0.field.value(i);
        for (std::size_t mu = 0; mu < M; ++mu) {
            Ivec(static_cast<Eigen::Index>(mu)) = I[mu][i];
            dIvec(static_cast<Eigen::Index>(mu)) = hv * s.phi(static_cast<Eigen::Index>(mu)) * p;
        }
        const MatrixXd dP = s.coupling.asDiagonal() * (hv * s.phi * s.phi.transpose());
        Eigen::PartialPivLU<MatrixXd> lu(pm.value(i));
        const VectorXd y = lu.solve(s.coupling.cwiseProduct(s.phi));
        const VectorXd dy = lu.solve(s.coupling.cwiseProduct(s.dphi) - dP * y);

        phi[i] = p - y.dot(Ivec);
        dphi[i] = phi0.field.deriv(i) - dy.dot(Ivec) - y.dot(dIvec);
    }
    return Solution{phi0.gamma_sq, SampledField(h.grid(), std::move(phi), std::move(dphi)), phi0.bc, std::nullopt};
}

std::vector<Solution> transformed_seed_solutions(std::span<const BargmannSeed> seeds, const PMatrix& pm,
                                                 const Weight& h) {
    require_matching(seeds, pm, h);
    const std::size_t M = seeds.size();
    const std::size_t n = h.grid().size();

    std::vector<std::vector<double>> y(M, std::vector<double>(n)), dy(M, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const NodeState s = node_state(seeds, i);
        const MatrixXd dP = s.coupling.asDiagonal() * (h.value(i) * s.phi * s.phi.transpose());
        Eigen::PartialPivLU<MatrixXd> lu(pm.value(i));
        const VectorXd yi = lu.solve(s.coupling.cwiseProduct(s.phi));
        const VectorXd dyi = lu.solve(s.coupling.cwiseProduct(s.dphi) - dP * yi);
        for (std::size_t mu = 0; mu < M; ++mu) {
            y[mu][i] = yi(static_cast<Eigen::Index>(mu));
            dy[mu][i] = dyi(static_cast<Eigen::Index>(mu));
        }
    }

    std::vector<Solution> out;
    out.reserve(M);
    for (std::size_t mu = 0; mu < M; ++mu) {
        out.push_back(Solution{seeds[mu].phi0.gamma_sq, SampledField(h.grid(), std::move(y[mu]), std::move(dy[mu])),
                               seeds[mu].phi0.bc, std::nullopt});
    }
    return out;
}

}  // namespace forge
