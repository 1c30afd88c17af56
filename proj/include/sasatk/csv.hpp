#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace sasatk::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Reads a numeric CSV. Lines starting with '#' are skipped; the first other
// line is the header and must equal expected_header when that is non-empty.
Table read(const std::string& path, const std::vector<std::string>& expected_header = {});

// %.17g
std::string fmt_double(double v);

class Writer {
public:
    Writer(const std::string& path, const std::vector<std::string>& header,
           const std::vector<std::string>& comments = {});
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    void close();

private:
    std::FILE* fp_ = nullptr;
    std::string path_;
    std::size_t width_;
};

}  // namespace sasatk::csv
