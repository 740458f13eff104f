#include "forge/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>

#include "forge/errors.hpp"
#include "forge/expr.hpp"

namespace forge::cli {

using nlohmann::json;

namespace {

void allow_keys(const json& j, const std::string& ctx, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw SchemaError(ctx + ": expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) throw SchemaError(ctx + ": unknown key '" + k + "'");
    }
}

const json& require(const json& j, const std::string& key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(ctx + ": missing required key '" + key + "'");
    return *it;
}

double number(const json& v, const std::string& ctx) {
    if (!v.is_number()) throw SchemaError(ctx + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(ctx + ": expected a finite number");
    return x;
}

std::string expression(const json& v, const std::string& ctx) {
    if (!v.is_string()) throw SchemaError(ctx + ": expected an expression string");
    std::string s = v.get<std::string>();
    try {
        parse(s);
    } catch (const ParseError& e) {
        throw SchemaError(ctx + ": " + e.what());
    }
    return s;
}

std::vector<double> numbers(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw SchemaError(ctx + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], ctx + "[" + std::to_string(i) + "]"));
    return out;
}

Direction parse_direction(const json& v) {
    if (v == "from_left") return Direction::FromLeft;
    if (v == "from_right") return Direction::FromRight;
    throw SchemaError("direction: expected \"from_left\" or \"from_right\"");
}

Mode parse_mode(const json& v) {
    if (v == "darboux") return Mode::Darboux;
    if (v == "chain") return Mode::Chain;
    if (v == "bargmann") return Mode::Bargmann;
    if (v == "multichannel") return Mode::Multichannel;
    throw SchemaError("mode: expected one of darboux, chain, bargmann, multichannel");
}

SeedSpec parse_seed(const json& j, const std::string& ctx) {
    allow_keys(j, ctx, {"expr", "gamma_sq", "bc", "C"});
    SeedSpec s;
    s.gamma_sq = number(require(j, "gamma_sq", ctx), ctx + ".gamma_sq");
    if (j.contains("expr")) {
        if (j.contains("bc")) throw SchemaError(ctx + ": an expression seed takes no bc");
        s.expr = expression(j["expr"], ctx + ".expr");
    } else if (j.contains("bc")) {
        s.bc = parse_bc(j["bc"]);
    }
    if (j.contains("C")) s.C = number(j["C"], ctx + ".C");
    return s;
}

ChannelSpec parse_channels(const json& j) {
    const std::string ctx = "multichannel";
    allow_keys(j, ctx, {"V0", "gamma_prime_sq", "c", "bc", "eval_gammas"});
    ChannelSpec cs;
    const json& V = require(j, "V0", ctx);
    if (!V.is_array() || V.empty()) throw SchemaError(ctx + ".V0: expected a non-empty square array");
    const std::size_t N = V.size();
    for (std::size_t a = 0; a < N; ++a) {
        if (!V[a].is_array() || V[a].size() != N) throw SchemaError(ctx + ".V0: expected an N x N array");
        for (std::size_t b = 0; b < N; ++b) {
            cs.V0.push_back(expression(V[a][b], ctx + ".V0[" + std::to_string(a) + "][" + std::to_string(b) + "]"));
        }
    }
    cs.gamma_prime_sq = numbers(require(j, "gamma_prime_sq", ctx), ctx + ".gamma_prime_sq");
    cs.c = numbers(require(j, "c", ctx), ctx + ".c");
    if (cs.gamma_prime_sq.size() != N || cs.c.size() != N) {
        throw SchemaError(ctx + ": gamma_prime_sq and c need one entry per channel");
    }
    if (j.contains("bc")) {
        const json& bc = j["bc"];
        if (bc.is_array()) {
            if (bc.size() != N) throw SchemaError(ctx + ".bc: need one entry per channel");
            for (const auto& x : bc) cs.bc.push_back(parse_bc(x));
        } else {
            cs.bc.assign(N, parse_bc(bc));
        }
    } else {
        cs.bc.assign(N, RegularAtLeft{});
    }
    if (j.contains("eval_gammas")) {
        const json& e = j["eval_gammas"];
        if (!e.is_array()) throw SchemaError(ctx + ".eval_gammas: expected an array of per-channel arrays");
        for (std::size_t k = 0; k < e.size(); ++k) {
            auto g = numbers(e[k], ctx + ".eval_gammas[" + std::to_string(k) + "]");
            if (g.size() != N) throw SchemaError(ctx + ".eval_gammas: need one entry per channel");
            cs.eval_gammas.push_back(std::move(g));
        }
    }
    return cs;
}

}  // namespace

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::Darboux: return "darboux";
        case Mode::Chain: return "chain";
        case Mode::Bargmann: return "bargmann";
        case Mode::Multichannel: return "multichannel";
    }
    return "unknown";
}

BoundaryCondition parse_bc(const json& j) {
    if (j == "regular") return RegularAtLeft{};
    if (j == "jost") return JostAtRight{};
    if (j.is_object()) {
        allow_keys(j, "bc", {"value", "slope", "at"});
        CustomBoundary c;
        c.value = number(require(j, "value", "bc"), "bc.value");
        c.slope = number(require(j, "slope", "bc"), "bc.slope");
        const json at = j.value("at", json("left"));
        if (at == "left") {
            c.at = Endpoint::Left;
        } else if (at == "right") {
            c.at = Endpoint::Right;
        } else {
            throw SchemaError("bc.at: expected \"left\" or \"right\"");
        }
        return c;
    }
    throw SchemaError("bc: expected \"regular\", \"jost\" or {value, slope, at}");
}

json bc_to_json(const BoundaryCondition& bc) {
    if (std::holds_alternative<RegularAtLeft>(bc)) return "regular";
    if (std::holds_alternative<JostAtRight>(bc)) return "jost";
    const auto& c = std::get<CustomBoundary>(bc);
    return {{"value", c.value}, {"slope", c.slope}, {"at", c.at == Endpoint::Left ? "left" : "right"}};
}

JobConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    allow_keys(j, "config",
               {"grid", "base", "mode", "direction", "tolerance", "seeds", "eval_gammas", "eval_bc", "multichannel",
                "output"});
    JobConfig cfg;
    cfg.source = j;

    static const json default_grid = {{"a", 0.0}, {"b", 10.0}, {"step", 1e-3}};
    const json& g = j.contains("grid") ? j["grid"] : default_grid;
    allow_keys(g, "grid", {"a", "b", "n", "step"});
    cfg.a = number(require(g, "a", "grid"), "grid.a");
    cfg.b = number(require(g, "b", "grid"), "grid.b");
    if (!(cfg.a < cfg.b)) throw SchemaError("grid: need a < b");
    if (g.contains("n") == g.contains("step")) throw SchemaError("grid: give exactly one of n or step");
    if (g.contains("n")) {
        if (!g["n"].is_number_integer() || g["n"].get<long long>() < 7) {
            throw SchemaError("grid.n: expected an integer >= 7");
        }
        cfg.n = g["n"].get<std::size_t>();
    } else {
        const double step = number(g["step"], "grid.step");
        if (!(step > 0.0)) throw SchemaError("grid.step: must be positive");
        cfg.n = RadialGrid::with_step(cfg.a, cfg.b, step).size();
        if (cfg.n < 7) throw SchemaError("grid.step: grid must have at least 7 nodes");
    }

    cfg.mode = parse_mode(require(j, "mode", "config"));

    if (j.contains("base")) {
        const json& base = j["base"];
        allow_keys(base, "base", {"V0", "h"});
        if (base.contains("V0")) cfg.V0 = expression(base["V0"], "base.V0");
        if (base.contains("h")) cfg.h = expression(base["h"], "base.h");
    }
    if (j.contains("direction")) cfg.direction = parse_direction(j["direction"]);
    if (j.contains("tolerance")) {
        const double t = number(j["tolerance"], "tolerance");
        if (!(t > 0.0)) throw SchemaError("tolerance: must be positive");
        cfg.tolerance = t;
    }
    if (j.contains("seeds")) {
        const json& s = j["seeds"];
        if (!s.is_array()) throw SchemaError("seeds: expected an array");
        for (std::size_t i = 0; i < s.size(); ++i) cfg.seeds.push_back(parse_seed(s[i], "seeds[" + std::to_string(i) + "]"));
    }
    if (j.contains("eval_gammas")) cfg.eval_gammas = numbers(j["eval_gammas"], "eval_gammas");
    if (j.contains("eval_bc")) cfg.eval_bc = parse_bc(j["eval_bc"]);
    if (j.contains("multichannel")) cfg.channels = parse_channels(j["multichannel"]);

    switch (cfg.mode) {
        case Mode::Darboux:
        case Mode::Chain:
            if (cfg.seeds.size() != 1) {
                throw SchemaError(std::string("mode ") + std::string(to_string(cfg.mode)) + " needs exactly one seed");
            }
            break;
        case Mode::Bargmann:
            if (cfg.seeds.empty()) throw SchemaError("mode bargmann needs at least one seed");
            break;
        case Mode::Multichannel:
            if (!cfg.channels) throw SchemaError("mode multichannel needs a multichannel section");
            if (!cfg.seeds.empty()) throw SchemaError("mode multichannel takes its seeds from the multichannel section");
            break;
    }
    if (cfg.mode != Mode::Multichannel && cfg.channels) {
        throw SchemaError("multichannel section is only valid with mode multichannel");
    }

    cfg.output_dir = base_dir;
    if (j.contains("output")) {
        const json& o = j["output"];
        allow_keys(o, "output", {"dir", "prefix"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) throw SchemaError("output.dir: expected a string");
            std::filesystem::path d = o["dir"].get<std::string>();
            cfg.output_dir = d.is_absolute() ? d : base_dir / d;
        }
        if (o.contains("prefix")) {
            if (!o["prefix"].is_string() || o["prefix"].get<std::string>().empty()) {
                throw SchemaError("output.prefix: expected a non-empty string");
            }
            cfg.prefix = o["prefix"].get<std::string>();
            if (cfg.prefix.find('/') != std::string::npos) throw SchemaError("output.prefix: must not contain '/'");
        }
    }
    return cfg;
}

JobConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::string config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

double default_tolerance() {
    if (const char* env = std::getenv("FORGE_TOLERANCE")) {
        char* end = nullptr;
        const double t = std::strtod(env, &end);
        if (end != env && *end == '\0' && t > 0.0 && std::isfinite(t)) return t;
        throw SchemaError(std::string("FORGE_TOLERANCE: not a positive number: ") + env);
    }
    return 1e-5;
}

}  // namespace forge::cli
