#include "perckit/io_util.hpp"

#include "perckit/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace perckit {

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string s(buf);
    if (s == "-0" || s.rfind("-0.", 0) == 0) {
        // Normalize negative zero so equal values always render equally.
        bool all_zero = true;
        for (char c : s)
            if (c != '-' && c != '0' && c != '.') { all_zero = false; break; }
        if (all_zero) s.erase(0, 1);
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path);
    out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') cur.pop_back();
        lines.push_back(cur);
    }
    return lines;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw FormatError("");
        return v;
    } catch (const std::exception&) {
        throw FormatError(context + ": not a number: \"" + text + "\"");
    }
}

long long parse_integer(const std::string& text, const std::string& context) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw FormatError("");
        return v;
    } catch (const std::exception&) {
        throw FormatError(context + ": not an integer: \"" + text + "\"");
    }
}

} // namespace perckit
