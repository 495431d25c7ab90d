#pragma once
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kr {

// Shortest decimal that round-trips the exact double.
std::string format_double(double v);

// Write to a sibling temp file, then rename into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct Csv {
    std::vector<std::string> header;  // column names, units in brackets
    std::vector<std::vector<double>> rows;
    std::string str() const;
};
void write_csv(const std::filesystem::path& path, const Csv& csv);

}  // namespace kr
