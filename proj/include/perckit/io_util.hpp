#pragma once

#include <string>
#include <vector>

namespace perckit {

// Fixed-point formatting used for every numeric value we emit; keeps
// output files byte-stable across runs and platforms.
std::string format_fixed(double value, int decimals = 6);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Splits one CSV line on commas. No quoting support; none of our
// formats need it.
std::vector<std::string> split_csv_line(const std::string& line);

// Splits file content into lines, tolerating a trailing newline and CRLF.
std::vector<std::string> split_lines(const std::string& text);

double parse_double(const std::string& text, const std::string& context);
long long parse_integer(const std::string& text, const std::string& context);

} // namespace perckit
