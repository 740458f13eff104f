#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "forge/errors.hpp"
#include "forge/solution.hpp"

namespace forge {

/// Outcome of substituting a sampled solution back into its equation.
///
/// `max_rel` is `max_abs / (scale + 1)`, where `scale` is the sup-norm of the
/// spectral term gamma^2 h phi (for Wronskian checks: of the Wronskian).
/// `pass` is `max_rel <= tolerance`.
struct ResidualReport {
    double max_abs = 0.0;
    double max_rel = 0.0;
    std::size_t argmax_node = 0;
    double tolerance = 0.0;
    bool pass = true;
};

/// Raised when a candidate solution fails its residual check.
class ResidualFailure : public Error {
public:
    ResidualFailure(const std::string& what, ResidualReport report)
        : Error(what + " (max residual " + std::to_string(report.max_abs) + " at node " +
                std::to_string(report.argmax_node) + ")"),
          report_(report) {}

    const ResidualReport& report() const noexcept { return report_; }

private:
    ResidualReport report_;
};

/// Residual of -phi'' + (V - gamma^2 h) phi with phi'' from the five-point
/// fourth-order central difference of the sampled values. Nodes within two of
/// either endpoint are excluded. Does not look at the derivative channel, so
/// it shares no arithmetic with the integrator or the transforms.
/// Throws InvalidArgument when the grid has fewer than 7 nodes.
ResidualReport residual(const SampledField& V, const SampledField& h, const Solution& phi, double tol);

ResidualReport residual(const SampledField& V, const SampledField& h, const SampledField& phi, double gamma_sq,
                        double tol);

/// Coupled-channel residual of -phi_ab'' + sum_k V_ak phi_kb - gamma_a^2 h phi_ab.
/// `V` is N x N row-major, `phi` is N x K row-major (K >= 1 columns),
/// `gamma_sq` has N entries (one per row/channel).
ResidualReport matrix_residual(std::span<const SampledField> V, const SampledField& h,
                               std::span<const SampledField> phi, std::span<const double> gamma_sq, double tol);

/// Checks W{phi_mu, phi} = (gamma_mu^2 - gamma^2) * integral of h phi_mu phi taken
/// from the anchor endpoint of `direction` to r.
ResidualReport check_wronskian_integral(const Solution& phi_mu, const Solution& phi, const SampledField& h,
                                        Direction direction, double tol);

}  // namespace forge
