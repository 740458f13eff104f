#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/config.hpp"
#include "forge/verify.hpp"

namespace forge::cli {

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kSchemaError = 2,
    kSingular = 3,
    kResidualFailure = 4,
};

struct JobResult {
    int exit_code = kOk;
    nlohmann::json report;
    std::vector<std::filesystem::path> files;
};

nlohmann::json to_json(const ResidualReport& r);

/// Runs the pipeline described by `cfg` and writes its artifacts. Library
/// errors propagate; use exit_code_for() to map them.
JobResult run_job(const JobConfig& cfg);

/// Maps the exception currently being handled to an exit code and prints a
/// one-line diagnostic to `err`.
int exit_code_for(std::exception_ptr e, std::ostream& err);

/// `forge run <config>` end to end; never throws.
int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

}  // namespace forge::cli
