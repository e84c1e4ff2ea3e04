#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "liddi/field.hpp"

namespace liddi {

namespace detail {

inline void write_header(std::ostream& os, const GridSpec& g, const std::string& dtype,
                         const std::string& unit) {
    os << "liddi-field 1\n";
    os << "dtype " << dtype << "\n";
    os << "n " << g.n[0] << " " << g.n[1] << " " << g.n[2] << "\n";
    os.precision(17);
    os << "spacing " << g.spacing << "\n";
    os << "origin " << g.origin[0] << " " << g.origin[1] << " " << g.origin[2] << "\n";
    os << "boundary " << to_string(g.boundary[0]) << " " << to_string(g.boundary[1]) << " "
       << to_string(g.boundary[2]) << "\n";
    os << "unit " << (unit.empty() ? "-" : unit) << "\n";
    os << "data\n";
}

struct FieldHeader {
    GridSpec grid;
    std::string dtype;
    std::string unit;
};

inline FieldHeader read_header(std::istream& is, const std::string& path) {
    auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error("read_field: " + path + ": " + why);
    };
    std::string line;
    if (!std::getline(is, line) || line != "liddi-field 1") throw fail("bad magic line");
    FieldHeader h;
    auto parse_boundary = [&](const std::string& s) {
        if (s == "padded") return Boundary::Padded;
        if (s == "periodic") return Boundary::Periodic;
        throw fail("bad boundary flag '" + s + "'");
    };
    while (std::getline(is, line)) {
        if (line == "data") {
            h.grid.validate();
            if (h.dtype != "float64" && h.dtype != "complex128") throw fail("bad dtype");
            return h;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dtype") ls >> h.dtype;
        else if (key == "n") ls >> h.grid.n[0] >> h.grid.n[1] >> h.grid.n[2];
        else if (key == "spacing") ls >> h.grid.spacing;
        else if (key == "origin") ls >> h.grid.origin[0] >> h.grid.origin[1] >> h.grid.origin[2];
        else if (key == "boundary") {
            std::string a, b, c;
            ls >> a >> b >> c;
            h.grid.boundary = {parse_boundary(a), parse_boundary(b), parse_boundary(c)};
        } else if (key == "unit") {
            std::string u;
            ls >> u;
            h.unit = (u == "-") ? "" : u;
        } else {
            throw fail("unknown header key '" + key + "'");
        }
        if (!ls) throw fail("malformed header line '" + line + "'");
    }
    throw fail("missing data marker");
}

} // namespace detail

/// Flat little-endian binary layout (row-major, z fastest) behind a short
/// plain-text header.
inline void write_field(const std::string& path, const ScalarField3D& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    detail::write_header(os, f.grid, "float64", f.unit);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

inline void write_field(const std::string& path, const ComplexField3D& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    detail::write_header(os, f.grid, "complex128", f.unit);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * 2 * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

inline ScalarField3D read_scalar_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    auto h = detail::read_header(is, path);
    if (h.dtype != "float64") throw std::runtime_error("read_field: " + path + ": not a float64 field");
    ScalarField3D f(h.grid, h.unit);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_field: truncated data in " + path);
    return f;
}

inline ComplexField3D read_complex_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    auto h = detail::read_header(is, path);
    if (h.dtype != "complex128")
        throw std::runtime_error("read_field: " + path + ": not a complex128 field");
    ComplexField3D f(h.grid, h.unit);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * 2 * sizeof(double)));
    if (!is) throw std::runtime_error("read_field: truncated data in " + path);
    return f;
}

/// Two-column CSV (position, value) with a caller-supplied header line.
inline void write_profile_csv(const std::string& path, const Profile1D& p,
                              const std::string& header) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_profile_csv: cannot open " + path);
    os << header << "\n";
    os.precision(12);
    for (std::size_t i = 0; i < p.position.size(); ++i)
        os << p.position[i] << "," << p.value[i] << "\n";
}

} // namespace liddi
