#include "forge/job.hpp"

#include <cmath>
#include <ostream>

#include "forge/csv.hpp"
#include "forge/forge.hpp"

namespace forge::cli {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const ResidualReport& r) {
    return {{"max_abs", r.max_abs},
            {"max_rel", r.max_rel},
            {"argmax_node", r.argmax_node},
            {"tolerance", r.tolerance},
            {"pass", r.pass}};
}

namespace {

struct Context {
    const JobConfig& cfg;
    RadialGrid grid;
    Weight h;
    SampledField V0;
    double tol;
    BoundaryCondition eval_bc;
    std::vector<double> r;
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    bool all_pass = true;
};

Context make_context(const JobConfig& cfg) {
    RadialGrid grid(cfg.a, cfg.b, cfg.n);
    Weight h(parse(cfg.h), grid);
    SampledField V0 = evaluate_on_grid(parse(cfg.V0), grid);
    const double tol = cfg.tolerance ? *cfg.tolerance : default_tolerance();
    BoundaryCondition bc = cfg.eval_bc ? *cfg.eval_bc
                                       : (cfg.direction == Direction::FromLeft ? BoundaryCondition(RegularAtLeft{})
                                                                               : BoundaryCondition(JostAtRight{}));
    return Context{cfg, grid, std::move(h), std::move(V0), tol, bc, grid.nodes(), {}, true};
}

std::string name(const Context& c, const std::string& what) { return c.cfg.prefix + "_" + what + ".csv"; }

std::string add_potential(Context& c, const SampledField& V) {
    const std::string n = name(c, "V");
    c.files.emplace_back(n, csv_text({"r", "V"}, {c.r, V.values()}));
    return n;
}

std::string add_solution(Context& c, const std::string& what, const SampledField& phi) {
    const std::string n = name(c, what);
    c.files.emplace_back(n, csv_text({"r", "phi", "dphi"}, {c.r, phi.values(), phi.derivs()}));
    return n;
}

json checked(Context& c, const ResidualReport& rep) {
    c.all_pass = c.all_pass && rep.pass;
    json j = to_json(rep);
    j["argmax_r"] = c.grid.node(rep.argmax_node);
    return j;
}

Solution make_seed(const Context& c, const SeedSpec& s) {
    if (s.expr) return seed_from_expression(*s.expr, c.grid, c.V0, c.h, s.gamma_sq);
    return solve(c.V0, c.h.field(), s.gamma_sq, s.bc);
}

json seed_json(const SeedSpec& s, const Solution& seed, const Context& c) {
    json j{{"gamma_sq", s.gamma_sq}, {"bc", bc_to_json(seed.bc)}};
    if (s.expr) j["expr"] = *s.expr;
    j["base_residual"] = to_json(residual(c.V0, c.h.field(), seed, 1e-6));
    return j;
}

double supnorm_diff(std::span<const double> x, std::span<const double> y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

Solution base_solution(const Context& c, double gamma_sq) { return solve(c.V0, c.h.field(), gamma_sq, c.eval_bc); }

void run_darboux(Context& c, json& rep) {
    const SeedSpec& spec = c.cfg.seeds.front();
    const Solution seed = make_seed(c, spec);
    rep["seeds"] = json::array({seed_json(spec, seed, c)});
    const DarbouxTransform t = make_darboux(seed, c.h, c.V0);
    rep["potential"] = {{"file", add_potential(c, t.new_potential)}};
    json sols = json::array();
    for (std::size_t k = 0; k < c.cfg.eval_gammas.size(); ++k) {
        const double g = c.cfg.eval_gammas[k];
        const Solution phi = darboux_solution(t, base_solution(c, g));
        sols.push_back({{"gamma_sq", g},
                        {"file", add_solution(c, "phi_" + std::to_string(k), phi.field)},
                        {"residual", checked(c, residual(t.new_potential, c.h.field(), phi, c.tol))}});
    }
    rep["solutions"] = sols;
}

json p_summary(const PMatrix& pm) {
    const double d0 = pm.determinant(0);
    return {{"order", pm.order()},
            {"direction", std::string(to_string(pm.direction()))},
            {"det_sign", d0 > 0 ? 1 : -1},
            {"min_abs_det", pm.min_abs_determinant()},
            {"max_abs_det", pm.max_abs_determinant()},
            {"max_condition", pm.max_condition()},
            {"quadrature_discrepancy", pm.quadrature_discrepancy()}};
}

void run_chain(Context& c, json& rep) {
    const SeedSpec& spec = c.cfg.seeds.front();
    const Solution seed = make_seed(c, spec);
    rep["seeds"] = json::array({seed_json(spec, seed, c)});
    rep["seeds"][0]["C"] = spec.C;
    const DarbouxChain chain = chain_second_step(seed, c.h, c.V0, spec.C, c.cfg.direction);
    rep["potential"] = {{"file", add_potential(c, chain.potential())}};

    const std::vector<BargmannSeed> single{{spec.C, seed}};
    const PMatrix pm = p_matrix(single, c.h, c.cfg.direction);
    const SampledField Vb = bargmann_potential(single, pm, c.h, c.V0);
    rep["chain_vs_bargmann_supnorm"] = supnorm_diff(chain.potential().values(), Vb.values());
    rep["p_matrix"] = p_summary(pm);

    json sols = json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < c.cfg.eval_gammas.size(); ++k) {
        const double g = c.cfg.eval_gammas[k];
        const Solution phi0 = base_solution(c, g);
        const Solution phi = chain.solution(phi0);
        const Solution phib = bargmann_solution(single, pm, c.h, phi0);
        worst = std::max(worst, supnorm_diff(phi.field.values(), phib.field.values()));
        sols.push_back({{"gamma_sq", g},
                        {"file", add_solution(c, "phi_" + std::to_string(k), phi.field)},
                        {"residual", checked(c, residual(chain.potential(), c.h.field(), phi, c.tol))}});
    }
    rep["solutions"] = sols;
    if (!c.cfg.eval_gammas.empty()) rep["chain_vs_bargmann_solution_supnorm"] = worst;
}

void run_bargmann(Context& c, json& rep) {
    std::vector<BargmannSeed> seeds;
    json sj = json::array();
    for (const auto& spec : c.cfg.seeds) {
        seeds.push_back({spec.C, make_seed(c, spec)});
        sj.push_back(seed_json(spec, seeds.back().phi0, c));
        sj.back()["C"] = spec.C;
    }
    const PMatrix pm = p_matrix(seeds, c.h, c.cfg.direction);
    rep["p_matrix"] = p_summary(pm);
    const SampledField V = bargmann_potential(seeds, pm, c.h, c.V0);
    rep["potential"] = {{"file", add_potential(c, V)}};

    const std::vector<Solution> ys = transformed_seed_solutions(seeds, pm, c.h);
    for (std::size_t mu = 0; mu < ys.size(); ++mu) {
        sj[mu]["transformed"] = {{"file", add_solution(c, "y_" + std::to_string(mu), ys[mu].field)},
                                 {"residual", checked(c, residual(V, c.h.field(), ys[mu], c.tol))}};
    }
    rep["seeds"] = sj;

    json sols = json::array();
    for (std::size_t k = 0; k < c.cfg.eval_gammas.size(); ++k) {
        const double g = c.cfg.eval_gammas[k];
        const Solution phi = bargmann_solution(seeds, pm, c.h, base_solution(c, g));
        sols.push_back({{"gamma_sq", g},
                        {"file", add_solution(c, "phi_" + std::to_string(k), phi.field)},
                        {"residual", checked(c, residual(V, c.h.field(), phi, c.tol))}});
    }
    rep["solutions"] = sols;
}

void run_multichannel(Context& c, json& rep) {
    const ChannelSpec& spec = *c.cfg.channels;
    const std::size_t N = spec.c.size();
    std::vector<SampledField> V0m;
    for (const auto& e : spec.V0) V0m.push_back(evaluate_on_grid(parse(e), c.grid));

    ChannelSystem cs{N, V0m, c.h, diagonal_base_solutions(V0m, c.h, spec.gamma_prime_sq, spec.bc), spec.c,
                     spec.gamma_prime_sq, c.cfg.direction};
    validate(cs);
    const std::vector<SampledField> V = multichannel_potential(cs);

    std::vector<std::string> header{"r"};
    std::vector<std::span<const double>> cols{c.r};
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
            header.push_back("V_" + std::to_string(a + 1) + std::to_string(b + 1));
            cols.push_back(V[a * N + b].values());
        }
    }
    const std::string vname = name(c, "V");
    c.files.emplace_back(vname, csv_text(header, cols));
    rep["potential"] = {{"file", vname}, {"channels", N}};
    rep["symmetry_defect"] = symmetry_defect(V, N);

    const TransformedSeeds ts = transformed_seed_vectors(cs);
    json psi = json::array();
    for (std::size_t a = 0; a < N; ++a) psi.push_back(add_solution(c, "psi_" + std::to_string(a + 1), ts.psi[a]));
    rep["transformed_seed"] = {{"files", psi},
                               {"residual", checked(c, matrix_residual(V, c.h.field(), ts.psi, spec.gamma_prime_sq,
                                                                       c.tol))}};

    json sols = json::array();
    for (std::size_t k = 0; k < spec.eval_gammas.size(); ++k) {
        const auto& g = spec.eval_gammas[k];
        const std::vector<Solution> phi = multichannel_solution(cs, g, SolutionForm::Integral);
        std::vector<SampledField> fields;
        json files = json::array();
        for (std::size_t a = 0; a < N; ++a) {
            for (std::size_t b = 0; b < N; ++b) {
                fields.push_back(phi[a * N + b].field);
                files.push_back(add_solution(
                    c, "phi_" + std::to_string(k) + "_" + std::to_string(a + 1) + std::to_string(b + 1),
                    phi[a * N + b].field));
            }
        }
        json entry{{"gamma_sq", g},
                   {"files", files},
                   {"residual", checked(c, matrix_residual(V, c.h.field(), fields, g, c.tol))}};
        if (std::abs(g[0] - spec.gamma_prime_sq[0]) > 1e-8) {
            const std::vector<Solution> alt = multichannel_solution(cs, g, SolutionForm::Wronskian);
            double gap = 0.0;
            for (std::size_t i = 0; i < alt.size(); ++i) {
                gap = std::max(gap, supnorm_diff(alt[i].field.values(), phi[i].field.values()));
            }
            entry["form_agreement"] = gap;
        }
        sols.push_back(entry);
    }
    rep["solutions"] = sols;
}

}  // namespace

JobResult run_job(const JobConfig& cfg) {
    Context c = make_context(cfg);
    json rep;
    rep["tool"] = "forge";
    rep["version"] = kVersion;
    rep["config_hash"] = config_hash(cfg.source);
    rep["config"] = cfg.source;
    rep["mode"] = std::string(to_string(cfg.mode));
    rep["tolerance"] = c.tol;
    rep["grid"] = {{"a", c.grid.a()}, {"b", c.grid.b()}, {"n", c.grid.size()}, {"step", c.grid.step()}};

    switch (cfg.mode) {
        case Mode::Darboux: run_darboux(c, rep); break;
        case Mode::Chain: run_chain(c, rep); break;
        case Mode::Bargmann: run_bargmann(c, rep); break;
        case Mode::Multichannel: run_multichannel(c, rep); break;
    }
    rep["all_pass"] = c.all_pass;

    JobResult res;
    res.exit_code = c.all_pass ? kOk : kResidualFailure;
    res.report = rep;
    ArtifactSet out(cfg.output_dir);
    for (const auto& [n, text] : c.files) res.files.push_back(out.stage(n, text));
    res.files.push_back(out.stage(cfg.prefix + "_report.json", rep.dump(2) + "\n"));
    out.commit();
    return res;
}

int exit_code_for(std::exception_ptr e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const ResidualFailure& x) {
        err << "forge: residual check failed: " << x.what() << "\n";
        return kResidualFailure;
    } catch (const SingularTransform& x) {
        err << "forge: singular transform: " << x.what() << "\n";
        return kSingular;
    } catch (const DomainError& x) {
        err << "forge: domain error: " << x.what() << "\n";
        return kSingular;
    } catch (const SchemaError& x) {
        err << "forge: config error: " << x.what() << "\n";
        return kSchemaError;
    } catch (const CsvError& x) {
        err << "forge: malformed csv: " << x.what() << "\n";
        return kSchemaError;
    } catch (const forge::Error& x) {
        // parse errors, grid mismatches, inconsistent arguments
        err << "forge: invalid input: " << x.what() << "\n";
        return kSchemaError;
    } catch (const nlohmann::json::exception& x) {
        err << "forge: config error: " << x.what() << "\n";
        return kSchemaError;
    } catch (const std::exception& x) {
        err << "forge: i/o error: " << x.what() << "\n";
        return kIoError;
    }
}

int run_command(const fs::path& config_path, std::ostream& out, std::ostream& err) {
    try {
        const JobConfig cfg = load_config(config_path);
        const JobResult res = run_job(cfg);
        for (const auto& f : res.files) out << "wrote " << f.string() << "\n";
        out << (res.exit_code == kOk ? "all residual checks passed" : "residual checks FAILED; see report") << "\n";
        return res.exit_code;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

}  // namespace forge::cli
