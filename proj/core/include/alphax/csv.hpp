#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace alphax::csv {

/// Minimal CSV reader for the plain comma-separated files this project uses
/// (no quoting or embedded commas). Tracks line numbers for error messages.
class Reader {
public:
    explicit Reader(const std::filesystem::path& path);

    /// Reads the next non-empty row; returns false at EOF.
    bool next(std::vector<std::string>& fields);

    std::size_t line() const { return line_; }
    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t line_ = 0;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Formats a double with fixed decimals, '.' separator, no locale surprises.
std::string format_double(double v, int decimals = 6);

/// Writes `content` to `path` atomically (temp file in the same directory,
/// then rename), so interrupted runs never leave truncated artifacts.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace alphax::csv
