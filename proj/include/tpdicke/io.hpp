#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpdicke/params.hpp"

namespace tpdicke {

inline constexpr const char* kToolVersion = "1.0.0";

/// Formats with 12 significant digits; same flags, same bytes.
std::string format_number(double v);

/// FNV-1a 64-bit digest of a file's bytes, hex encoded.
std::string file_digest(const std::string& path);

/// One emitted CSV: a versioned "# schema=..." line, a header line, then
/// rows.  write() creates/overwrites the file and returns its path.
class CsvWriter {
public:
    CsvWriter(std::string schema, std::vector<std::string> columns);
    void add_row(const std::vector<std::string>& cells);
    std::string body() const;
    void write(const std::string& path) const;

private:
    std::string schema_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Run manifest: command, parameter echo, tool version, timestamp and
/// per-file digests.  Written last so its digests cover final contents.
struct RunManifest {
    std::string command;
    ModelParams params;
    TruncationSpec trunc;
    std::vector<std::string> output_files;

    void write(const std::string& path) const;
};

}  // namespace tpdicke
