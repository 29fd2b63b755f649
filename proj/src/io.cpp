#include "pfar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pfar/error.hpp"

namespace pfar {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& v) {
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_series_csv(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line == "t,value") continue;
            // headerless single-column or t,value data is tolerated
        }
        const auto comma = line.find(',');
        const std::string field = trim(comma == std::string::npos ? line : line.substr(comma + 1));
        double v = 0.0;
        if (line.find(',', comma == std::string::npos ? 0 : comma + 1) != std::string::npos || !parse_number(field, v)) {
            fail_data("malformed-csv", "cannot parse line " + std::to_string(lineno) + ": '" + line + "'");
        }
        if (!std::isfinite(v)) {
            fail_data("malformed-csv", "non-finite value on line " + std::to_string(lineno));
        }
        values.push_back(v);
    }
    if (values.empty()) {
        fail_data("empty-input", "input contains no data");
    }
    return values;
}

std::vector<double> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail_data("io-error", "cannot open '" + path + "'");
    }
    return parse_series_csv(in);
}

void write_series_csv(std::ostream& out, const std::vector<double>& values) {
    out << "t,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i + 1) << ',' << format_double(values[i]) << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail_data("io-error", "cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        fail_data("io-error", "write to '" + path + "' failed");
    }
}

}  // namespace pfar
