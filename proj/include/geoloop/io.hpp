#pragma once

// Input-file formats and locale-independent number formatting.
//
// Lattice file: first line n, then n rows of n whitespace-separated
// decimal floats (basis vectors as rows). '#' starts a comment line.
//
// Fuchsian group file: a header line `area base_re base_im [free] [slack]`
// (free is 0 or 1, default 0; slack defaults to 6), then one generator per
// line as four decimal floats a b c d, row-major, unit determinant.

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hyperbolic.hpp"
#include "lattice.hpp"

namespace geoloop {

// Shortest-round-trip decimal at 17 significant digits, locale-independent.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

inline std::vector<double> parse_floats(const std::string& line, const char* what) {
    std::istringstream ss(line);
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    std::string rest;
    if (ss.fail() && !ss.eof() && ss >> rest)
        throw ParseError(std::string(what) + ": malformed number near '" + rest + "'");
    ss.clear();
    if (ss >> rest) throw ParseError(std::string(what) + ": trailing junk '" + rest + "'");
    return values;
}

} // namespace detail

inline LatticeModel read_lattice(std::istream& in) {
    const auto lines = detail::content_lines(in);
    if (lines.empty()) throw ParseError("lattice file: empty");
    const auto header = detail::parse_floats(lines[0], "lattice file header");
    if (header.size() != 1 || header[0] != static_cast<double>(static_cast<int>(header[0])) ||
        header[0] < 1 || header[0] > 16)
        throw ParseError("lattice file: first line must be the dimension n (1..16)");
    const int n = static_cast<int>(header[0]);
    if (static_cast<int>(lines.size()) != n + 1)
        throw ParseError("lattice file: expected " + std::to_string(n) + " basis rows");
    Matrix basis;
    for (int i = 1; i <= n; ++i) {
        auto row = detail::parse_floats(lines[i], "lattice file row");
        if (static_cast<int>(row.size()) != n)
            throw ParseError("lattice file: row " + std::to_string(i) + " must have " +
                             std::to_string(n) + " entries");
        basis.push_back(std::move(row));
    }
    return make_lattice(basis);
}

inline LatticeModel read_lattice_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open lattice file '" + path + "'");
    return read_lattice(in);
}

inline FuchsianModel read_fuchsian(std::istream& in, const std::string& name = "file-group") {
    const auto lines = detail::content_lines(in);
    if (lines.empty()) throw ParseError("group file: empty");
    const auto header = detail::parse_floats(lines[0], "group file header");
    if (header.size() < 3 || header.size() > 5)
        throw ParseError("group file: header must be 'area base_re base_im [free] [slack]'");

    FuchsianModel model;
    model.name = name;
    model.area = header[0];
    if (!(model.area > 0.0)) throw ParseError("group file: area must be positive");
    if (!(header[2] > 0.0)) throw ParseError("group file: base point must have im > 0");
    model.base_point = UhpPoint(header[1], header[2]);
    if (header.size() >= 4) {
        if (header[3] != 0.0 && header[3] != 1.0)
            throw ParseError("group file: free flag must be 0 or 1");
        model.is_free = header[3] == 1.0;
    }
    if (header.size() == 5) {
        if (header[4] < 0.0) throw ParseError("group file: slack must be nonnegative");
        model.slack = header[4];
    }

    if (lines.size() == 1) throw ParseError("group file: no generators");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto row = detail::parse_floats(lines[i], "group file generator");
        if (row.size() != 4)
            throw ParseError("group file: generator line " + std::to_string(i) +
                             " must have 4 entries a b c d");
        model.generators.push_back(
            {"g" + std::to_string(i - 1), GroupMatrix::checked(row[0], row[1], row[2], row[3])});
    }
    return model;
}

inline FuchsianModel read_fuchsian_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open group file '" + path + "'");
    return read_fuchsian(in);
}

} // namespace geoloop
