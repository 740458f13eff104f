#pragma once

#include "forge/solution.hpp"

namespace forge {

struct DarbouxOptions {
    /// A seed with |y(r)| below this at any node is treated as having a node there.
    double node_epsilon = 1e-10;
};

/// One generalized Darboux step: a nodeless seed y0 of the base problem at
/// gamma'^2 and the potential it generates,
///   V = V0 - 2 sqrt(h) d/dr[ (1/sqrt(h)) d/dr ln y0 ] + sqrt(h) d^2/dr^2 (1/sqrt(h)).
struct DarbouxTransform {
    Solution seed;
    Weight weight;
    SampledField base_potential;
    SampledField new_potential;
};

/// Throws SingularTransform if the seed vanishes at a node.
DarbouxTransform make_darboux(const Solution& seed, const Weight& h, const SampledField& V0,
                              const DarbouxOptions& opts = {});

/// The transformed potential. The second derivative of the seed is taken from
/// its curvature channel when present, otherwise from the base equation
/// y0'' = (V0 - gamma'^2 h) y0; derivatives of h are symbolic. No finite
/// differences are involved.
SampledField darboux_potential(const Solution& seed, const Weight& h, const SampledField& V0,
                               const DarbouxOptions& opts = {});

/// phi = W{y0, phi0} / (sqrt(h) y0), a solution of the transformed problem at
/// phi0's gamma^2. The derivative channel uses dW/dr = h (gamma'^2 - gamma^2) y0 phi0.
Solution darboux_solution(const Solution& seed, const Weight& h, const Solution& phi0,
                          const DarbouxOptions& opts = {});

Solution darboux_solution(const DarbouxTransform& t, const Solution& phi0);

/// Two Darboux steps in sequence, the second seeded by
///   eta1 = P / (sqrt(h) y0),  P(r) = 1 + C * integral of h y0^2 from the anchor to r.
/// The intermediate potential cancels out, leaving
///   V = V0 - 2 sqrt(h) d/dr[ (1/sqrt(h)) d/dr ln P ],
/// so the seed itself may vanish at the anchor (regular seeds) as long as P > 0.
class DarbouxChain {
public:
    const SampledField& potential() const noexcept { return potential_; }
    /// P(r) with its exact derivative C h y0^2.
    const SampledField& normalization() const noexcept { return normalization_; }
    double coupling() const noexcept { return coupling_; }
    Direction direction() const noexcept { return direction_; }

    /// phi = phi0 - C y0 W{y0, phi0} / (P (gamma'^2 - gamma^2)).
    /// Throws InvalidArgument when gamma^2 coincides with the seed's gamma'^2.
    Solution solution(const Solution& phi0) const;

private:
    friend DarbouxChain chain_second_step(const Solution&, const Weight&, const SampledField&, double, Direction);

    DarbouxChain(Solution seed, Weight weight, SampledField normalization, SampledField potential, double coupling,
                 Direction direction);

    Solution seed_;
    Weight weight_;
    SampledField normalization_;
    SampledField potential_;
    double coupling_;
    Direction direction_;
};

/// Throws SingularTransform naming the first node where P <= 0.
DarbouxChain chain_second_step(const Solution& seed, const Weight& h, const SampledField& V0, double C,
                               Direction direction);

DarbouxChain chain_second_step(const DarbouxTransform& first, double C, Direction direction);

}  // namespace forge
