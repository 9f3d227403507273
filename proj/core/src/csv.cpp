#include "aircal/csv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>

#include "aircal/errors.hpp"

namespace aircal::csv {

std::string format_double(double value, int significant_digits) {
    // to_chars renders like printf %g in the C locale, but is immune to the
    // process locale; the formats promise plain decimal points everywhere.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                   significant_digits);
    return std::string(buf, res.ptr);
}

double round_to_digits(double value, int significant_digits) {
    double out = value;
    parse_double(format_double(value, significant_digits), out);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') ++first; // from_chars rejects a leading '+'
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

Table read_table(std::istream& in) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tokens = split_line(t);
        if (!have_header) {
            table.header = tokens;
            have_header = true;
            continue;
        }
        if (tokens.size() != table.header.size()) {
            throw Error(ErrorCategory::RaggedRows,
                        "line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(tokens.size()));
        }
        std::vector<double> row;
        row.reserve(tokens.size());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            double v;
            if (!parse_double(tokens[i], v)) {
                throw Error(ErrorCategory::MalformedRow,
                            "line " + std::to_string(line_no) + ", column " + std::to_string(i + 1) +
                                ": cannot parse '" + tokens[i] + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw Error(ErrorCategory::EmptyInput, "no header row found");
    }
    return table;
}

} // namespace aircal::csv
