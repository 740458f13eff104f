#include "forge/solver.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "forge/errors.hpp"
#include "forge/verify.hpp"

namespace forge {

std::string describe(const BoundaryCondition& bc) {
    struct Visitor {
        std::string operator()(const RegularAtLeft&) const { return "regular"; }
        std::string operator()(const JostAtRight&) const { return "jost"; }
        std::string operator()(const CustomBoundary& c) const {
            std::ostringstream os;
            os.precision(17);
            os << "custom(value=" << c.value << ", slope=" << c.slope
               << ", at=" << (c.at == Endpoint::Left ? "left" : "right") << ")";
            return os.str();
        }
    };
    return std::visit(Visitor{}, bc);
}

Weight::Weight(const AnalyticExpr& h, const RadialGrid& grid)
    : expr_(h), field_(evaluate_on_grid(h, grid)), second_(grid.size()) {
    const AnalyticExpr d2 = differentiate(differentiate(h));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(field_.value(i) > 0.0)) throw DomainError("weight h(r) must be positive", i);
        try {
            second_[i] = d2(grid.node(i));
        } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " evaluating h''", i);
        }
    }
}

namespace {

struct StartState {
    std::size_t node;
    double value;
    double slope;
};

StartState start_state(const SampledField& V, const SampledField& h, double gamma_sq, const BoundaryCondition& bc) {
    const RadialGrid& g = V.grid();
    const std::size_t last = g.size() - 1;
    struct Visitor {
        const SampledField& V;
        const SampledField& h;
        double gamma_sq;
        const RadialGrid& g;
        std::size_t last;

        StartState operator()(const RegularAtLeft&) const { return {0, 0.0, 1.0}; }
        StartState operator()(const JostAtRight&) const {
            const double q = V.value(last) - gamma_sq * h.value(last);
            if (!(q > 0.0)) throw DomainError("Jost condition needs V(b) - gamma^2 h(b) > 0", last);
            const double kappa = std::sqrt(q);
            const double value = std::exp(-kappa * (g.b() - g.a()));
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw DomainError("Jost normalization underflows; shorten the interval", last);
            }
            return {last, value, -kappa * value};
        }
        StartState operator()(const CustomBoundary& c) const {
            return {c.at == Endpoint::Left ? 0 : last, c.value, c.slope};
        }
    };
    return std::visit(Visitor{V, h, gamma_sq, g, last}, bc);
}

}  // namespace

Solution solve(const SampledField& V, const SampledField& h, double gamma_sq, const BoundaryCondition& bc) {
    require_same_grid(V.grid(), h.grid(), "solve");
    const RadialGrid& grid = V.grid();
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(h.value(i) > 0.0)) throw DomainError("weight h(r) must be positive", i);
    }

    // q = V - gamma^2 h with its derivative, used for Hermite midpoints.
    std::vector<double> q(n), dq(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = V.value(i) - gamma_sq * h.value(i);
        dq[i] = V.deriv(i) - gamma_sq * h.deriv(i);
    }

    const StartState s = start_state(V, h, gamma_sq, bc);
    std::vector<double> phi(n), dphi(n);
    phi[s.node] = s.value;
    dphi[s.node] = s.slope;

    const bool forward = s.node == 0;
    const double dr = forward ? grid.step() : -grid.step();

    auto step = [&](std::size_t from, std::size_t to) {
        const double q0 = q[from];
        const double q1 = q[to];
        const double qm = 0.5 * (q0 + q1) + dr * (dq[from] - dq[to]) / 8.0;
        const double y = phi[from];
        const double z = dphi[from];

        const double k1y = z;
        const double k1z = q0 * y;
        const double k2y = z + 0.5 * dr * k1z;
        const double k2z = qm * (y + 0.5 * dr * k1y);
        const double k3y = z + 0.5 * dr * k2z;
        const double k3z = qm * (y + 0.5 * dr * k2y);
        const double k4y = z + dr * k3z;
        const double k4z = q1 * (y + dr * k3y);

        phi[to] = y + dr / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dphi[to] = z + dr / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        if (!std::isfinite(phi[to]) || !std::isfinite(dphi[to])) {
            throw DomainError("solution overflowed during integration", to);
        }
    };

    if (forward) {
        for (std::size_t i = 0; i + 1 < n; ++i) step(i, i + 1);
    } else {
        for (std::size_t i = n - 1; i > 0; --i) step(i, i - 1);
    }

    return Solution{gamma_sq, SampledField(grid, std::move(phi), std::move(dphi)), bc, std::nullopt};
}

Solution seed_from_expression(const AnalyticExpr& y, const RadialGrid& grid, const SampledField& V0, const Weight& h,
                              double gamma_sq, const SeedOptions& opts) {
    require_same_grid(V0.grid(), grid, "seed_from_expression");
    require_same_grid(h.grid(), grid, "seed_from_expression");

    SampledField field = evaluate_on_grid(y, grid);
    const AnalyticExpr d2 = differentiate(differentiate(y));
    std::vector<double> curvature(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            curvature[i] = d2(grid.node(i));
        } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " evaluating seed curvature", i);
        }
    }

    const ResidualReport rep = residual(V0, h.field(), field, gamma_sq, opts.tolerance);
    if (!rep.pass) {
        throw ResidualFailure("seed '" + y.to_string() + "' does not solve the base equation at gamma^2 = " +
                                  std::to_string(gamma_sq),
                              rep);
    }

    CustomBoundary bc{field.value(0), field.deriv(0), Endpoint::Left};
    return Solution{gamma_sq, std::move(field), bc, std::move(curvature)};
}

Solution seed_from_expression(std::string_view y_text, const RadialGrid& grid, const SampledField& V0,
                              const Weight& h, double gamma_sq, const SeedOptions& opts) {
    return seed_from_expression(parse(y_text), grid, V0, h, gamma_sq, opts);
}

}  // namespace forge
