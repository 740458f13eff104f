#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "forge/solution.hpp"

namespace forge {

/// N coupled channels sharing the weight h(r):
///   -phi_ab'' + sum_k V_ak phi_kb = gamma_a^2 h phi_ab.
///
/// `base_potential` is N x N row-major and symmetric. `seed_solutions` is the
/// N x N row-major base solution matrix at the seed level gamma'_a^2 (row a
/// solves channel a); together with `c` it defines the seed vectors
/// psi0_a = sum_b phi0_ab c_b.
struct ChannelSystem {
    std::size_t channels = 0;
    std::vector<SampledField> base_potential;
    Weight weight;
    std::vector<Solution> seed_solutions;
    std::vector<double> c;
    std::vector<double> gamma_prime_sq;
    Direction direction = Direction::FromLeft;
};

struct ChannelOptions {
    /// Relative residual tolerance applied to the base seed matrix.
    double seed_tolerance = 1e-6;
};

/// Checks sizes, grids, symmetry of the base potential, and that the seed
/// matrix solves the base system. Throws InvalidArgument / ResidualFailure.
void validate(const ChannelSystem& cs, const ChannelOptions& opts = {});

/// psi0_a = sum_b phi0_ab c_b with derivative channels.
std::vector<SampledField> seed_vectors(const ChannelSystem& cs);

struct TransformedSeeds {
    std::vector<SampledField> psi;
    /// D(r) = 1 + sum_j integral of h psi0_j^2 from the anchor, shared by all channels.
    SampledField denominator;
};

/// psi_a = psi0_a / D. Throws SingularTransform if D <= 0 at a node.
TransformedSeeds transformed_seed_vectors(const ChannelSystem& cs);

/// V_ab = V0_ab - 2 h (psi_a psi0_b)' - h' psi_a psi0_b, N x N row-major.
std::vector<SampledField> multichannel_potential(const ChannelSystem& cs);

/// Largest |V_ab - V_ba| over all nodes and channel pairs.
double symmetry_defect(std::span<const SampledField> V, std::size_t channels);

enum class SolutionForm {
    /// phi_ab = phi0_ab - psi_a sum_j integral of h psi0_j phi0_jb from the anchor.
    Integral,
    /// phi_ab = phi0_ab - psi_a sum_j W{psi0_j, phi0_jb} / (gamma'_j^2 - gamma_j^2).
    Wronskian,
};

/// Transformed solution matrix at the new channel parameters `gamma_sq`
/// from a base solution matrix `phi0` (N x N row-major) at the same
/// parameters. The shift gamma_a^2 - gamma'_a^2 must be the same in every
/// channel (a common energy offset); the Wronskian form additionally needs it
/// to be non-zero.
std::vector<Solution> multichannel_solution(const ChannelSystem& cs, std::span<const Solution> phi0,
                                            std::span<const double> gamma_sq,
                                            SolutionForm form = SolutionForm::Integral);

/// As above, building phi0 by integrating each channel of a diagonal base
/// potential with the boundary condition of the matching diagonal seed entry.
std::vector<Solution> multichannel_solution(const ChannelSystem& cs, std::span<const double> gamma_sq,
                                            SolutionForm form = SolutionForm::Integral);

/// Base solutions phi0_ab = delta_ab * solve(V0_aa, h, gamma_sq[a], bc[a]) of a
/// diagonal base system. Throws InvalidArgument if the base is coupled.
std::vector<Solution> diagonal_base_solutions(std::span<const SampledField> V0, const Weight& h,
                                              std::span<const double> gamma_sq,
                                              std::span<const BoundaryCondition> bc);

}  // namespace forge
