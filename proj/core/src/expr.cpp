#include "forge/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

struct AnalyticExpr::Node {
    ExprOp op = ExprOp::Constant;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    bool has_r = false;
    std::size_t count = 1;
};

namespace {

using NodePtr = std::shared_ptr<const AnalyticExpr::Node>;

struct FunctionName {
    std::string_view name;
    ExprOp op;
};

constexpr std::array<FunctionName, 9> kFunctions{{
    {"exp", ExprOp::Exp},
    {"log", ExprOp::Log},
    {"sin", ExprOp::Sin},
    {"cos", ExprOp::Cos},
    {"sinh", ExprOp::Sinh},
    {"cosh", ExprOp::Cosh},
    {"tanh", ExprOp::Tanh},
    {"sech", ExprOp::Sech},
    {"sqrt", ExprOp::Sqrt},
}};

std::string_view function_name(ExprOp op) {
    for (const auto& f : kFunctions) {
        if (f.op == op) return f.name;
    }
    return "?";
}

bool is_function(ExprOp op) {
    switch (op) {
        case ExprOp::Exp:
        case ExprOp::Log:
        case ExprOp::Sin:
        case ExprOp::Cos:
        case ExprOp::Sinh:
        case ExprOp::Cosh:
        case ExprOp::Tanh:
        case ExprOp::Sech:
        case ExprOp::Sqrt:
            return true;
        default:
            return false;
    }
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

double apply_unary(ExprOp op, double x) {
    switch (op) {
        case ExprOp::Neg:
            return -x;
        case ExprOp::Exp:
            return std::exp(x);
        case ExprOp::Log:
            if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
            return std::log(x);
        case ExprOp::Sin:
            return std::sin(x);
        case ExprOp::Cos:
            return std::cos(x);
        case ExprOp::Sinh:
            return std::sinh(x);
        case ExprOp::Cosh:
            return std::cosh(x);
        case ExprOp::Tanh:
            return std::tanh(x);
        case ExprOp::Sech:
            return 1.0 / std::cosh(x);
        case ExprOp::Sqrt:
            if (x < 0.0) throw DomainError("sqrt of negative value " + std::to_string(x));
            return std::sqrt(x);
        default:
            throw DomainError("not a unary operator");
    }
}

double apply_binary(ExprOp op, double a, double b) {
    switch (op) {
        case ExprOp::Add:
            return a + b;
        case ExprOp::Sub:
            return a - b;
        case ExprOp::Mul:
            return a * b;
        case ExprOp::Div:
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        case ExprOp::Pow:
            if (!is_integer(b) && !(a > 0.0)) {
                throw DomainError("non-integer power of non-positive base " + std::to_string(a));
            }
            if (a == 0.0 && b < 0.0) throw DomainError("negative power of zero");
            return std::pow(a, b);
        default:
            throw DomainError("not a binary operator");
    }
}

double eval_node(const AnalyticExpr::Node& n, double r) {
    double result = 0.0;
    switch (n.op) {
        case ExprOp::Constant:
            return n.value;
        case ExprOp::Variable:
            return r;
        case ExprOp::Add:
        case ExprOp::Sub:
        case ExprOp::Mul:
        case ExprOp::Div:
        case ExprOp::Pow:
            result = apply_binary(n.op, eval_node(*n.lhs, r), eval_node(*n.rhs, r));
            break;
        default:
            result = apply_unary(n.op, eval_node(*n.lhs, r));
            break;
    }
    if (!std::isfinite(result)) throw DomainError("non-finite value at r = " + std::to_string(r));
    return result;
}

// Precedence levels used by the printer; higher binds tighter.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

int precedence(const AnalyticExpr::Node& n) {
    switch (n.op) {
        case ExprOp::Add:
        case ExprOp::Sub:
            return kSum;
        case ExprOp::Mul:
        case ExprOp::Div:
            return kProduct;
        case ExprOp::Neg:
            return kUnary;
        case ExprOp::Pow:
            return kPower;
        case ExprOp::Constant:
            return std::signbit(n.value) ? kUnary : kAtom;
        default:
            return kAtom;
    }
}

std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    std::string s(buf.data(), end);
    // Shortest text that round-trips, if shorter.
    auto [end2, ec2] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string shortest(buf.data(), end2);
    return shortest.size() < s.size() ? shortest : s;
}

void print(const AnalyticExpr::Node& n, int min_prec, std::string& out) {
    const int prec = precedence(n);
    const bool paren = prec < min_prec;
    if (paren) out += '(';
    switch (n.op) {
        case ExprOp::Constant:
            out += format_number(n.value);
            break;
        case ExprOp::Variable:
            out += 'r';
            break;
        case ExprOp::Add:
        case ExprOp::Sub:
            print(*n.lhs, kSum, out);
            out += n.op == ExprOp::Add ? " + " : " - ";
            print(*n.rhs, kSum + 1, out);
            break;
        case ExprOp::Mul:
        case ExprOp::Div:
            print(*n.lhs, kProduct, out);
            out += n.op == ExprOp::Mul ? "*" : "/";
            print(*n.rhs, kProduct + 1, out);
            break;
        case ExprOp::Neg:
            out += '-';
            print(*n.lhs, kUnary, out);
            break;
        case ExprOp::Pow:
            print(*n.lhs, kAtom, out);
            out += '^';
            print(*n.rhs, kUnary, out);
            break;
        default:
            out += function_name(n.op);
            out += '(';
            print(*n.lhs, kSum, out);
            out += ')';
            break;
    }
    if (paren) out += ')';
}

NodePtr make_node(ExprOp op, double value, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<AnalyticExpr::Node>();
    n->op = op;
    n->value = value;
    n->has_r = op == ExprOp::Variable || (lhs && lhs->has_r) || (rhs && rhs->has_r);
    n->count = 1 + (lhs ? lhs->count : 0) + (rhs ? rhs->count : 0);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    AnalyticExpr parse_all() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        AnalyticExpr e = parse_sum();
        skip_space();
        if (pos_ < text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    AnalyticExpr parse_sum() {
        AnalyticExpr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = AnalyticExpr::binary(ExprOp::Add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = AnalyticExpr::binary(ExprOp::Sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    AnalyticExpr parse_product() {
        AnalyticExpr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = AnalyticExpr::binary(ExprOp::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = AnalyticExpr::binary(ExprOp::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    AnalyticExpr parse_unary() {
        if (accept('-')) return AnalyticExpr::unary(ExprOp::Neg, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    AnalyticExpr parse_power() {
        AnalyticExpr base = parse_primary();
        if (accept('^')) return AnalyticExpr::binary(ExprOp::Pow, base, parse_unary());
        return base;
    }

    AnalyticExpr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            AnalyticExpr inner = parse_sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    AnalyticExpr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits();
            } else {
                pos_ = save;  // "2e" followed by something else: leave 'e' for the identifier check
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw ParseError("malformed number '" + std::string(first, last) + "'", start);
        }
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            throw ParseError("missing operator after number", pos_);
        }
        return AnalyticExpr::constant(value);
    }

    AnalyticExpr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "r") return AnalyticExpr::variable();
        if (name == "pi") return AnalyticExpr::constant(std::numbers::pi);
        if (name == "e") return AnalyticExpr::constant(std::numbers::e);
        for (const auto& f : kFunctions) {
            if (f.name == name) {
                if (!accept('(')) throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
                AnalyticExpr arg = parse_sum();
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                return AnalyticExpr::unary(f.op, arg);
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// AnalyticExpr

AnalyticExpr::AnalyticExpr() : node_(make_node(ExprOp::Constant, 0.0, nullptr, nullptr)) {}

AnalyticExpr::AnalyticExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

AnalyticExpr AnalyticExpr::constant(double value) {
    return AnalyticExpr(make_node(ExprOp::Constant, value, nullptr, nullptr));
}

AnalyticExpr AnalyticExpr::variable() { return AnalyticExpr(make_node(ExprOp::Variable, 0.0, nullptr, nullptr)); }

AnalyticExpr AnalyticExpr::unary(ExprOp op, const AnalyticExpr& arg) {
    if (op != ExprOp::Neg && !is_function(op)) throw InvalidArgument("not a unary operator");
    if (!arg.depends_on_r()) {
        try {
            const double v = apply_unary(op, arg.constant_value());
            if (std::isfinite(v)) return constant(v);
        } catch (const DomainError&) {
            // keep the node; the error surfaces at evaluation time
        }
    }
    if (op == ExprOp::Neg && arg.op() == ExprOp::Neg) return AnalyticExpr(arg.node_->lhs);
    return AnalyticExpr(make_node(op, 0.0, arg.node_, nullptr));
}

AnalyticExpr AnalyticExpr::binary(ExprOp op, const AnalyticExpr& lhs, const AnalyticExpr& rhs) {
    const bool lc = !lhs.depends_on_r();
    const bool rc = !rhs.depends_on_r();
    if (lc && rc) {
        try {
            const double v = apply_binary(op, lhs.constant_value(), rhs.constant_value());
            if (std::isfinite(v)) return constant(v);
        } catch (const DomainError&) {
        }
    }
    auto is = [](const AnalyticExpr& e, bool c, double v) { return c && e.constant_value() == v; };
    switch (op) {
        case ExprOp::Add:
            if (is(lhs, lc, 0.0)) return rhs;
            if (is(rhs, rc, 0.0)) return lhs;
            break;
        case ExprOp::Sub:
            if (is(rhs, rc, 0.0)) return lhs;
            if (is(lhs, lc, 0.0)) return unary(ExprOp::Neg, rhs);
            break;
        case ExprOp::Mul:
            if (is(lhs, lc, 0.0) || is(rhs, rc, 0.0)) return constant(0.0);
            if (is(lhs, lc, 1.0)) return rhs;
            if (is(rhs, rc, 1.0)) return lhs;
            break;
        case ExprOp::Div:
            if (is(rhs, rc, 1.0)) return lhs;
            break;
        case ExprOp::Pow:
            if (is(rhs, rc, 1.0)) return lhs;
            if (is(rhs, rc, 0.0)) return constant(1.0);
            break;
        default:
            throw InvalidArgument("not a binary operator");
    }
    return AnalyticExpr(make_node(op, 0.0, lhs.node_, rhs.node_));
}

double AnalyticExpr::operator()(double r) const { return eval_node(*node_, r); }

ExprOp AnalyticExpr::op() const noexcept { return node_->op; }

bool AnalyticExpr::depends_on_r() const noexcept { return node_->has_r; }

double AnalyticExpr::constant_value() const noexcept { return node_->value; }

std::size_t AnalyticExpr::size() const noexcept { return node_->count; }

std::string AnalyticExpr::to_string() const {
    std::string out;
    print(*node_, kSum, out);
    return out;
}

AnalyticExpr operator+(const AnalyticExpr& a, const AnalyticExpr& b) { return AnalyticExpr::binary(ExprOp::Add, a, b); }
AnalyticExpr operator-(const AnalyticExpr& a, const AnalyticExpr& b) { return AnalyticExpr::binary(ExprOp::Sub, a, b); }
AnalyticExpr operator*(const AnalyticExpr& a, const AnalyticExpr& b) { return AnalyticExpr::binary(ExprOp::Mul, a, b); }
AnalyticExpr operator/(const AnalyticExpr& a, const AnalyticExpr& b) { return AnalyticExpr::binary(ExprOp::Div, a, b); }
AnalyticExpr operator-(const AnalyticExpr& a) { return AnalyticExpr::unary(ExprOp::Neg, a); }
AnalyticExpr pow(const AnalyticExpr& base, const AnalyticExpr& exponent) {
    return AnalyticExpr::binary(ExprOp::Pow, base, exponent);
}

AnalyticExpr parse(std::string_view text) { return Parser(text).parse_all(); }

AnalyticExpr differentiate(const AnalyticExpr& e) {
    const auto& n = *e.node_;
    if (!n.has_r) return AnalyticExpr::constant(0.0);
    using E = AnalyticExpr;
    auto k = [](double v) { return E::constant(v); };
    if (n.op == ExprOp::Variable) return k(1.0);

    const E u(n.lhs);
    const E du = differentiate(u);
    switch (n.op) {
        case ExprOp::Add:
            return du + differentiate(E(n.rhs));
        case ExprOp::Sub:
            return du - differentiate(E(n.rhs));
        case ExprOp::Mul: {
            const E v(n.rhs);
            return du * v + u * differentiate(v);
        }
        case ExprOp::Div: {
            const E v(n.rhs);
            return (du * v - u * differentiate(v)) / pow(v, k(2.0));
        }
        case ExprOp::Pow: {
            const E v(n.rhs);
            if (!v.depends_on_r()) {
                const double p = v.constant_value();
                return k(p) * pow(u, k(p - 1.0)) * du;
            }
            if (!u.depends_on_r()) {
                return e * E::unary(ExprOp::Log, u) * differentiate(v);
            }
            return e * (differentiate(v) * E::unary(ExprOp::Log, u) + v * du / u);
        }
        case ExprOp::Neg:
            return -du;
        case ExprOp::Exp:
            return e * du;
        case ExprOp::Log:
            return du / u;
        case ExprOp::Sin:
            return E::unary(ExprOp::Cos, u) * du;
        case ExprOp::Cos:
            return -(E::unary(ExprOp::Sin, u) * du);
        case ExprOp::Sinh:
            return E::unary(ExprOp::Cosh, u) * du;
        case ExprOp::Cosh:
            return E::unary(ExprOp::Sinh, u) * du;
        case ExprOp::Tanh:
            return pow(E::unary(ExprOp::Sech, u), k(2.0)) * du;
        case ExprOp::Sech:
            return -(e * E::unary(ExprOp::Tanh, u) * du);
        case ExprOp::Sqrt:
            return du / (k(2.0) * e);
        default:
            throw InvalidArgument("cannot differentiate node");
    }
}

SampledField evaluate_on_grid(const AnalyticExpr& e, const RadialGrid& grid) {
    const AnalyticExpr de = differentiate(e);
    std::vector<double> values(grid.size());
    std::vector<double> derivs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        try {
            values[i] = e(r);
            derivs[i] = de(r);
        } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " evaluating '" + e.to_string() + "'", i);
        }
    }
    return SampledField(grid, std::move(values), std::move(derivs));
}

}  // namespace forge
