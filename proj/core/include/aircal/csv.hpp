#pragma once

// Small CSV helpers shared by every file format in the toolkit. All formats
// are UTF-8, comma-separated, '#' starts a comment line, decimal point only.

#include <iosfwd>
#include <string>
#include <vector>

namespace aircal::csv {

// Shortest-faithful decimal rendering at a fixed significant-digit budget.
// Analysis artifacts use 9 digits; campaign files use 12 so geodetic degrees
// survive a round trip at the 1e-9 level.
std::string format_double(double value, int significant_digits = 9);

// Rounds through the artifact decimal representation; JSON emitters use this
// so numbers diff cleanly between runs.
double round_to_digits(double value, int significant_digits = 9);

std::string trim(const std::string& s);
std::vector<std::string> split_line(const std::string& line, char delim = ',');

// Strict full-token parse; rejects trailing garbage, accepts nan/inf spellings.
bool parse_double(const std::string& token, double& out);

// A parsed numeric table: header tokens plus rows of doubles. Used for the
// generic artifacts (truth, sensitivity, plot data) and by tests to re-read
// everything the CLI writes.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Reads header + numeric rows; throws MalformedRow with line context on any
// token that does not parse, RaggedRows when a row width disagrees with the
// header.
Table read_table(std::istream& in);

} // namespace aircal::csv
