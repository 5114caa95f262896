#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace sqg::csv {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_double(double value);

/// Strict parse of a whole token; throws IoError on trailing garbage.
double parse_double(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Line-oriented CSV writer. Throws IoError if the file cannot be opened or a
/// write fails.
class Writer {
public:
    Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

    void comment(std::string_view text);
    void row(std::initializer_list<double> values);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

struct Table {
    std::vector<std::string> comments;  // '#' lines, without the marker
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);

/// Same layout as Table with cells kept as text.
struct TextTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
};

TextTable read_text(const std::filesystem::path& path);

}  // namespace sqg::csv
