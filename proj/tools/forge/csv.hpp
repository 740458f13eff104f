#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge::cli {

/// Malformed CSV input.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest-safe fixed format: 17 significant digits, so every double round-trips.
std::string format_number(double x);

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::span<const double>>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

CsvTable read_csv(const std::filesystem::path& path);

/// Files are first written next to their destination under a temporary name
/// and only renamed into place by commit(). Anything not committed is removed
/// when the set is destroyed, so a failed job leaves no partial output.
class ArtifactSet {
public:
    explicit ArtifactSet(std::filesystem::path dir);
    ~ArtifactSet();
    ArtifactSet(const ArtifactSet&) = delete;
    ArtifactSet& operator=(const ArtifactSet&) = delete;

    /// Returns the final path of the file.
    std::filesystem::path stage(const std::string& name, const std::string& content);
    void commit();

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
    bool committed_ = false;
};

}  // namespace forge::cli
