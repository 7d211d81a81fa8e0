#include "alie/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace alie {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t\r");
        const auto e = tok.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : tok.substr(b, e - b + 1));
    }
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* c = s.c_str();
    char* end = nullptr;
    out = std::strtod(c, &end);
    return end == c + s.size();
}

}  // namespace

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CsvError("cannot open " + path, 0);

    TimeSeries series;
    int column = -1;
    int lineno = 0;
    std::string line;
    bool first_content = true;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_row(line);
        double v = 0;
        if (column < 0) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (parse_number(fields[i], v)) {
                    column = static_cast<int>(i);
                    break;
                }
            }
            if (column < 0) {
                if (first_content) {  // header row
                    first_content = false;
                    continue;
                }
                throw CsvError("no numeric column found", lineno);
            }
        }
        first_content = false;
        if (column >= static_cast<int>(fields.size()))
            throw CsvError("row has too few columns", lineno);
        if (!parse_number(fields[column], v)) throw CsvError("non-numeric value", lineno);
        series.values.push_back(v);
    }
    if (series.values.empty()) throw CsvError("no data rows in " + path, 0);
    return series;
}

}  // namespace alie
