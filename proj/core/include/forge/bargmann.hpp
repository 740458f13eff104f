#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "forge/solution.hpp"

namespace forge {

/// One term of an M-fold Bargmann transform: the base solution phi0 at
/// gamma_mu^2 (taken from phi0.gamma_sq) and its norm-like constant C_mu.
struct BargmannSeed {
    double C = 0.0;
    Solution phi0;
};

struct BargmannOptions {
    std::size_t max_seeds = 8;
    /// Spectral parameters closer than this are rejected as duplicates.
    double duplicate_gap = 1e-8;
    /// Relative size of W{phi_mu, phi_nu} at the anchor endpoint above which
    /// seeds are considered to belong to a different boundary class.
    double anchor_tolerance = 1e-6;
};

/// P_{mu nu}(r) = delta_{mu nu} + C_mu W{phi_mu, phi_nu} / (gamma_mu^2 - gamma_nu^2)
/// at every node, with diagonal entries from the limit
/// P_{mu mu} = 1 + C_mu * integral of h phi_mu^2 from the anchor to r.
/// Also carries the exact derivative P' = diag(C) h Phi Phi^T.
class PMatrix {
public:
    std::size_t order() const noexcept { return order_; }
    std::size_t nodes() const noexcept { return det_.size(); }
    Direction direction() const noexcept { return direction_; }

    Eigen::MatrixXd value(std::size_t node) const;
    Eigen::MatrixXd derivative(std::size_t node) const;
    double determinant(std::size_t node) const noexcept { return det_[node]; }
    /// 1-norm condition number at a node.
    double condition(std::size_t node) const noexcept { return cond_[node]; }

    double min_abs_determinant() const noexcept;
    double max_abs_determinant() const noexcept;
    double max_condition() const noexcept;
    /// Largest difference between an off-diagonal entry in Wronskian form and
    /// the same entry from quadrature, relative to 1 + |entry|.
    double quadrature_discrepancy() const noexcept { return quadrature_gap_; }

private:
    friend PMatrix p_matrix(std::span<const BargmannSeed>, const Weight&, Direction, const BargmannOptions&);

    std::size_t order_ = 0;
    Direction direction_ = Direction::FromLeft;
    std::vector<double> entries_;
    std::vector<double> derivs_;
    std::vector<double> det_;
    std::vector<double> cond_;
    double quadrature_gap_ = 0.0;
};

/// Validates the seed set and builds P. Throws InvalidArgument for an empty or
/// oversized set, duplicate gamma_mu^2, or seeds whose boundary class does not
/// match `direction`; SingularTransform if det P vanishes or changes sign.
PMatrix p_matrix(std::span<const BargmannSeed> seeds, const Weight& h, Direction direction,
                 const BargmannOptions& opts = {});

/// V = V0 - 2 sqrt(h) d/dr[ (1/sqrt(h)) d/dr ln det P ], evaluated as
/// V0 - 2 G' + (h'/h) G with G = tr(P^-1 P') and
/// G' = tr(P^-1 P'') - tr((P^-1 P')^2); P' and P'' come from the carried
/// derivatives of the seeds, so no finite differences enter.
SampledField bargmann_potential(std::span<const BargmannSeed> seeds, const PMatrix& pm, const Weight& h,
                                const SampledField& V0);

SampledField bargmann_potential(std::span<const BargmannSeed> seeds, const Weight& h, const SampledField& V0,
                                Direction direction, const BargmannOptions& opts = {});

/// phi = phi0 - sum_mu y_mu(r) I_mu(r), where y = P^-1 diag(C) Phi and
/// I_mu = W{phi_mu, phi0} / (gamma_mu^2 - gamma^2) is evaluated as the integral
/// of h phi_mu phi0 from the anchor. Throws InvalidArgument if gamma^2 equals
/// some gamma_mu^2 (use transformed_seed_solutions) or if phi0 is not in the
/// seeds' boundary class.
Solution bargmann_solution(std::span<const BargmannSeed> seeds, const PMatrix& pm, const Weight& h,
                           const Solution& phi0, const BargmannOptions& opts = {});

/// The M solutions y_mu = sum_nu (P^-1)_{mu nu} C_nu phi_nu of the transformed
/// problem at gamma_mu^2.
std::vector<Solution> transformed_seed_solutions(std::span<const BargmannSeed> seeds, const PMatrix& pm,
                                                 const Weight& h);

}  // namespace forge
