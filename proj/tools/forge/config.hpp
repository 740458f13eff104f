#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/grid.hpp"
#include "forge/solution.hpp"

namespace forge::cli {

/// Configuration file does not match the documented schema.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { Darboux, Chain, Bargmann, Multichannel };

std::string_view to_string(Mode m);

/// A seed is either a closed-form expression checked against the base
/// equation, or a base solution integrated from a boundary condition.
struct SeedSpec {
    std::optional<std::string> expr;
    double gamma_sq = 0.0;
    BoundaryCondition bc = RegularAtLeft{};
    double C = 1.0;
};

struct ChannelSpec {
    std::vector<std::string> V0;  // N x N row-major expressions
    std::vector<double> gamma_prime_sq;
    std::vector<double> c;
    std::vector<BoundaryCondition> bc;
    std::vector<std::vector<double>> eval_gammas;
};

struct JobConfig {
    double a = 0.0;
    double b = 10.0;
    std::size_t n = 10001;
    std::string V0 = "0";
    std::string h = "1";
    Mode mode = Mode::Darboux;
    Direction direction = Direction::FromLeft;
    std::optional<double> tolerance;
    std::vector<SeedSpec> seeds;
    std::vector<double> eval_gammas;
    std::optional<BoundaryCondition> eval_bc;
    std::optional<ChannelSpec> channels;
    std::filesystem::path output_dir;
    std::string prefix = "forge";
    nlohmann::json source;
};

BoundaryCondition parse_bc(const nlohmann::json& j);
nlohmann::json bc_to_json(const BoundaryCondition& bc);

/// Validates `j` against the job schema. Relative output paths are resolved
/// against `base_dir` (the directory holding the config file).
JobConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

JobConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

/// Tolerance from the environment (FORGE_TOLERANCE) or 1e-5.
double default_tolerance();

}  // namespace forge::cli
