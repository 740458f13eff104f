#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <span>
#include <vector>

#include "forge/forge.hpp"

namespace forge::testing {

inline SampledField sample(const RadialGrid& g, const std::function<double(double)>& f,
                           const std::function<double(double)>& df) {
    std::vector<double> v(g.size()), d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        v[i] = f(g.node(i));
        d[i] = df(g.node(i));
    }
    return SampledField(g, std::move(v), std::move(d));
}

inline SampledField field(const RadialGrid& g, const char* expr) { return evaluate_on_grid(parse(expr), g); }

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double sup_diff(std::span<const double> a, const RadialGrid& g, const std::function<double(double)>& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - f(g.node(i))));
    return m;
}

// Random composites built only from pieces that are defined on all of R, so
// every sample point is inside the domain.
inline std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 15);
    std::uniform_real_distribution<double> cst(-2.0, 2.0);
    auto sub = [&] { return random_expr(rng, depth - 1); };
    switch (pick(rng)) {
        case 0: return "r";
        case 1: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", cst(rng));
            return std::string("(") + buf + ")";
        }
        case 2: return "(" + sub() + " + " + sub() + ")";
        case 3: return "(" + sub() + " - " + sub() + ")";
        case 4: return "(" + sub() + " * " + sub() + ")";
        case 5: return "sin(" + sub() + ")";
        case 6: return "cos(" + sub() + ")";
        case 7: return "tanh(" + sub() + ")";
        case 8: return "sech(" + sub() + ")";
        case 9: return "exp(tanh(" + sub() + "))";
        case 10: return "log(1 + (" + sub() + ")^2)";
        case 11: return "sqrt(2 + sin(" + sub() + "))";
        case 12: return "(" + sub() + ")^2";
        case 13: return "1/(1 + (" + sub() + ")^2)";
        case 14: return "sinh(tanh(" + sub() + "))";
        default: return "cosh(tanh(" + sub() + ")) ^ 1.5";
    }
}


}  // namespace forge::testing
