#include "forge/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace forge::cli {

namespace fs = std::filesystem;

std::string format_number(double x) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size()) throw CsvError("header and column counts differ");
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += format_number(columns[c][r]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw CsvError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line);
    t.columns.resize(t.header.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = 0.0;
            const char* first = cells[c].data();
            const char* last = first + cells[c].size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last) {
                throw CsvError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + cells[c] + "'");
            }
            t.columns[c].push_back(v);
        }
    }
    return t;
}

ArtifactSet::ArtifactSet(fs::path dir) : dir_(std::move(dir)) {}

ArtifactSet::~ArtifactSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, dst] : staged_) fs::remove(tmp, ec);
}

fs::path ArtifactSet::stage(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path dst = dir_ / name;
    const fs::path tmp = dir_ / ("." + name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw std::ios_base::failure("write failed for " + tmp.string());
    staged_.emplace_back(tmp, dst);
    return dst;
}

void ArtifactSet::commit() {
    for (const auto& [tmp, dst] : staged_) fs::rename(tmp, dst);
    committed_ = true;
}

}  // namespace forge::cli
