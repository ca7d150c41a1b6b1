#pragma once

// Matrix file formats.
//
// Plain text: 16 reals in row-major order separated by whitespace and/or
// commas; lines whose first non-blank character is '#' are ignored.
//
// Structured: a JSON object with key "mueller" holding a 4x4 array, e.g.
//   {"mueller": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}

#include "core.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mueller {

class ParseError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline Matrix4 parse_json_matrix(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("mueller"))
        throw ParseError("JSON input must be an object with key \"mueller\"");
    const auto& rows = doc.at("mueller");
    if (!rows.is_array() || rows.size() != 4) throw ParseError("\"mueller\" must hold 4 rows");
    Matrix4 m;
    for (std::size_t r = 0; r < 4; ++r) {
        const auto& row = rows[r];
        if (!row.is_array() || row.size() != 4) throw ParseError("every row of \"mueller\" must hold 4 numbers");
        for (std::size_t c = 0; c < 4; ++c) {
            if (!row[c].is_number()) throw ParseError("non-numeric entry in \"mueller\"");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
        }
    }
    return m;
}

inline Matrix4 parse_plain_matrix(const std::string& text)
{
    std::vector<double> values;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            double v = 0.0;
            const char* begin = tok.data();
            const char* end = begin + tok.size();
            if (*begin == '+') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end || !std::isfinite(v))
                throw ParseError("line " + std::to_string(lineno) + ": not a finite number: '" + tok + "'");
            values.push_back(v);
        }
    }
    if (values.size() != 16)
        throw ParseError("expected 16 numbers, found " + std::to_string(values.size()));
    Matrix4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = values[static_cast<std::size_t>(4 * r + c)];
    return m;
}

} // namespace detail

inline Matrix4 parse_matrix(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return detail::parse_json_matrix(text);
    return detail::parse_plain_matrix(text);
}

inline Matrix4 read_matrix_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str());
}

/// Rounds to 12 significant digits so the JSON writer prints at most 12.
inline double sig12(double v)
{
    if (!std::isfinite(v) || v == 0.0) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

} // namespace mueller
