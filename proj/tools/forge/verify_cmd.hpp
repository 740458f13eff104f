#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "forge/verify.hpp"

namespace forge::cli {

/// Re-checks exported artifacts: a `r,V` potential and a `r,phi,dphi`
/// solution on the same uniform grid, against -phi'' + V phi = gamma^2 h phi.
ResidualReport verify_artifacts(const std::filesystem::path& potential_csv, const std::filesystem::path& solution_csv,
                                const std::string& h_expr, double gamma_sq, double tol);

/// `forge verify`; prints the report as JSON on `out`. Never throws.
int verify_command(const std::filesystem::path& potential_csv, const std::filesystem::path& solution_csv,
                   const std::string& h_expr, double gamma_sq, double tol, std::ostream& out, std::ostream& err);

/// `forge parse-check`: prints the canonical form and derivative, or the
/// syntax error with a caret under the offending byte.
int parse_check_command(const std::string& text, std::ostream& out, std::ostream& err);

}  // namespace forge::cli
