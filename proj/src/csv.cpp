#include "sasatk/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "sasatk/errors.hpp"

namespace sasatk::csv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i];
    }
    return out;
}

}  // namespace

Table read(const std::string& path, const std::vector<std::string>& expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (!have_header) {
            t.header = split(s);
            if (!expected_header.empty() && t.header != expected_header) {
                throw IoError(path + ": expected header '" + join(expected_header) + "', got '" +
                              join(t.header) + "'");
            }
            have_header = true;
            continue;
        }
        const auto cells = split(s);
        if (cells.size() != t.header.size()) {
            throw IoError(fmt::format("{}:{}: expected {} columns, got {}", path, lineno,
                                      t.header.size(), cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                std::size_t used = 0;
                const double v = std::stod(c, &used);
                if (used != c.size()) throw std::invalid_argument(c);
                row.push_back(v);
            } catch (const std::exception&) {
                throw IoError(fmt::format("{}:{}: not a number: '{}'", path, lineno, c));
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError(path + ": missing header");
    return t;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

Writer::Writer(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::string>& comments)
    : path_(path), width_(header.size()) {
    fp_ = std::fopen(path.c_str(), "w");
    if (!fp_) throw IoError("cannot write " + path);
    for (const auto& c : comments) fmt::print(fp_, "# {}\n", c);
    fmt::print(fp_, "{}\n", join(header));
}

Writer::~Writer() {
    if (fp_) std::fclose(fp_);
}

void Writer::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(fmt_double(v));
    raw_row(cells);
}

void Writer::raw_row(const std::vector<std::string>& cells) {
    if (!fp_) throw IoError(path_ + ": writer closed");
    if (cells.size() != width_) throw IoError(path_ + ": row width mismatch");
    fmt::print(fp_, "{}\n", join(cells));
}

void Writer::close() {
    if (fp_ && std::fclose(fp_) != 0) {
        fp_ = nullptr;
        throw IoError("error closing " + path_);
    }
    fp_ = nullptr;
}

}  // namespace sasatk::csv
