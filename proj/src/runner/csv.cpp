#include "sqg/csv.hpp"

#include <charconv>
#include <cmath>

#include "sqg/error.hpp"

namespace sqg::csv {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw IoError("format_double: conversion failed");
    return std::string(buffer, end);
}

double parse_double(std::string_view token) {
    token = trim(token);
    if (token == "nan") return NAN;
    if (token == "inf") return INFINITY;
    if (token == "-inf") return -INFINITY;
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || token.empty()) {
        throw IoError("not a number: '" + std::string(token) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

void Writer::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void Writer::row(std::initializer_list<double> values) {
    row(std::vector<double>(values));
}

void Writer::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw IoError("csv row width mismatch in " + path_.string());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_double(values[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
}

void Writer::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw IoError("csv row width mismatch in " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\n") != std::string::npos) {
            throw IoError("csv cell contains a separator: " + cells[i]);
        }
        out_ << (i ? "," : "") << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
}

void Writer::close() {
    out_.close();
    if (out_.fail()) throw IoError("close failed: " + path_.string());
}

namespace {

std::size_t find_column(const std::vector<std::string>& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw IoError("missing csv column '" + std::string(name) + "'");
}

template <class Row>
void read_lines(const std::filesystem::path& path, std::vector<std::string>& comments,
                std::vector<std::string>& header, Row&& on_row) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        const auto view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            comments.emplace_back(trim(view.substr(1)));
            continue;
        }
        if (header.empty()) {
            for (auto field : split(view)) header.emplace_back(field);
            continue;
        }
        const auto fields = split(view);
        if (fields.size() != header.size()) {
            throw IoError("ragged row in " + path.string() + ": " + line);
        }
        on_row(fields);
    }
    if (header.empty()) throw IoError("empty csv: " + path.string());
}

}  // namespace

std::size_t Table::column(std::string_view name) const { return find_column(header, name); }
std::size_t TextTable::column(std::string_view name) const { return find_column(header, name); }

Table read(const std::filesystem::path& path) {
    Table table;
    read_lines(path, table.comments, table.header, [&](const std::vector<std::string_view>& fields) {
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(parse_double(f));
        table.rows.push_back(std::move(row));
    });
    return table;
}

TextTable read_text(const std::filesystem::path& path) {
    TextTable table;
    read_lines(path, table.comments, table.header, [&](const std::vector<std::string_view>& fields) {
        table.rows.emplace_back(fields.begin(), fields.end());
    });
    return table;
}

}  // namespace sqg::csv
