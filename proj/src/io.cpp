#include "tpdicke/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include "json.hpp"
#include <sstream>

namespace tpdicke {

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("file_digest: cannot open " + path);
    uint64_t h = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw DomainError("CsvWriter: row has " + std::to_string(cells.size()) +
                          " cells, expected " + std::to_string(columns_.size()));
    rows_.push_back(cells);
}

std::string CsvWriter::body() const {
    std::ostringstream out;
    out << "# schema=" << schema_ << "\n";
    for (size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("CsvWriter: cannot write " + path);
    out << body();
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["params"] = {{"omega", params.omega},
                   {"omega1", params.omega1},
                   {"g", params.g},
                   {"n_atoms", params.n_atoms}};
    j["trunc"] = {{"n_max", trunc.n_max},
                  {"rel_tol", trunc.rel_tol},
                  {"n_max_ceiling", trunc.n_max_ceiling}};
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = stamp;
    j["outputs"] = nlohmann::json::array();
    for (const std::string& f : output_files)
        j["outputs"].push_back({{"file", f}, {"digest", file_digest(f)}});

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("RunManifest: cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace tpdicke
