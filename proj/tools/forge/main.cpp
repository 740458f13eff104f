#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "forge/config.hpp"
#include "forge/forge.hpp"
#include "forge/job.hpp"
#include "forge/verify_cmd.hpp"

int main(int argc, char** argv) {
    CLI::App app{"forge: generalized Darboux and Bargmann transformations"};
    app.set_version_flag("--version", std::string(forge::kVersion));
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Run a job described by a JSON config file");
    run->add_option("config", config, "Job configuration")->required();

    std::string v_csv, phi_csv, h_expr;
    double gamma_sq = 0.0;
    std::optional<double> tol;
    auto* verify = app.add_subcommand("verify", "Residual check of an exported potential and solution");
    verify->set_help_flag("--help", "Print this help message and exit");
    verify->add_option("potential", v_csv, "CSV with header r,V")->required();
    verify->add_option("solution", phi_csv, "CSV with header r,phi,dphi")->required();
    verify->add_option("--h", h_expr, "Weight function h(r)")->required();
    verify->add_option("--gamma-sq", gamma_sq, "Spectral parameter gamma^2")->required();
    verify->add_option("--tol", tol, "Relative tolerance (default: $FORGE_TOLERANCE or 1e-5)");

    std::string expr;
    auto* check = app.add_subcommand("parse-check", "Parse an expression and print it with its derivative");
    check->add_option("expr", expr, "Expression in r")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : forge::cli::kSchemaError;
    }

    if (*run) return forge::cli::run_command(config, std::cout, std::cerr);
    if (*verify) {
        double t = 0.0;
        try {
            t = tol ? *tol : forge::cli::default_tolerance();
        } catch (const std::exception& e) {
            std::cerr << "forge: " << e.what() << "\n";
            return forge::cli::kSchemaError;
        }
        return forge::cli::verify_command(v_csv, phi_csv, h_expr, gamma_sq, t, std::cout, std::cerr);
    }
    return forge::cli::parse_check_command(expr, std::cout, std::cerr);
}
