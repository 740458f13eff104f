#include "forge/verify_cmd.hpp"

#include <cmath>
#include <ostream>

#include "forge/csv.hpp"
#include "forge/expr.hpp"
#include "forge/job.hpp"

namespace forge::cli {

namespace fs = std::filesystem;

namespace {

void expect_header(const CsvTable& t, const std::vector<std::string>& want, const fs::path& path) {
    if (t.header != want) {
        std::string w;
        for (const auto& s : want) w += (w.empty() ? "" : ",") + s;
        throw CsvError(path.string() + ": expected header '" + w + "'");
    }
}

}  // namespace

ResidualReport verify_artifacts(const fs::path& potential_csv, const fs::path& solution_csv, const std::string& h_expr,
                                double gamma_sq, double tol) {
    const CsvTable V = read_csv(potential_csv);
    const CsvTable phi = read_csv(solution_csv);
    expect_header(V, {"r", "V"}, potential_csv);
    expect_header(phi, {"r", "phi", "dphi"}, solution_csv);
    if (V.rows() != phi.rows()) {
        throw GridMismatch("potential has " + std::to_string(V.rows()) + " rows but solution has " +
                           std::to_string(phi.rows()));
    }
    if (V.rows() < 7) throw CsvError("need at least 7 grid rows");
    const auto& r = V.columns[0];
    if (r != phi.columns[0]) throw GridMismatch("potential and solution are sampled on different r values");

    const RadialGrid grid(r.front(), r.back(), r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (std::abs(r[i] - grid.node(i)) > 1e-9 * (1.0 + std::abs(r[i]))) {
            throw CsvError("r column is not a uniform grid (row " + std::to_string(i + 2) + ")");
        }
    }
    const SampledField Vf = SampledField::from_values(grid, V.columns[1]);
    const SampledField pf(grid, phi.columns[1], phi.columns[2]);
    const SampledField h = evaluate_on_grid(parse(h_expr), grid);
    return residual(Vf, h, pf, gamma_sq, tol);
}

int verify_command(const fs::path& potential_csv, const fs::path& solution_csv, const std::string& h_expr,
                   double gamma_sq, double tol, std::ostream& out, std::ostream& err) {
    try {
        const ResidualReport rep = verify_artifacts(potential_csv, solution_csv, h_expr, gamma_sq, tol);
        out << to_json(rep).dump(2) << "\n";
        return rep.pass ? kOk : kResidualFailure;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

int parse_check_command(const std::string& text, std::ostream& out, std::ostream& err) {
    try {
        const AnalyticExpr e = parse(text);
        out << "expr:  " << e.to_string() << "\n";
        out << "d/dr:  " << differentiate(e).to_string() << "\n";
        return kOk;
    } catch (const ParseError& x) {
        err << text << "\n" << std::string(std::min(x.offset(), text.size()), ' ') << "^\n" << x.what() << "\n";
        return kSchemaError;
    }
}

}  // namespace forge::cli
