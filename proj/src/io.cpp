#include "kgeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kgeo {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field(std::ostream& os, const ScalarField& f) {
    const int n = f.n();
    os << "torus-field v1 N=" << n << "\n";
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if (l) os << ' ';
            os << num17(f.at(k, l));
        }
        os << "\n";
    }
}

namespace {

int parse_field_header(std::istream& is) {
    std::string line;
    // tolerate blank lines between blocks
    do {
        if (!std::getline(is, line)) throw format_error("torus-field: missing header");
    } while (line.find_first_not_of(" \t\r") == std::string::npos);
    std::istringstream ls(line);
    std::string word, version, ntag;
    ls >> word >> version >> ntag;
    if (word != "torus-field" || version != "v1" || ntag.rfind("N=", 0) != 0)
        throw format_error("torus-field: bad header '" + line + "'");
    int n = 0;
    try {
        n = std::stoi(ntag.substr(2));
    } catch (const std::exception&) {
        throw format_error("torus-field: bad N in header '" + line + "'");
    }
    if (n < 8) throw format_error("torus-field: N must be >= 8");
    return n;
}

ScalarField read_field_body(std::istream& is, int n) {
    ScalarField f(GridSpec::make(n));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double v;
            if (!(is >> v))
                throw format_error("torus-field: expected " + std::to_string(n * n) +
                                   " values, ran out at row " + std::to_string(k));
            if (!std::isfinite(v))
                throw format_error("torus-field: non-finite entry at (" +
                                   std::to_string(k) + "," + std::to_string(l) + ")");
            f.at(k, l) = v;
        }
    // consume trailing newline so that block readers line up
    is.ignore(1, '\n');
    return f;
}

} // namespace

ScalarField read_field(std::istream& is) {
    const int n = parse_field_header(is);
    return read_field_body(is, n);
}

void write_field_file(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw format_error("cannot open '" + path + "' for writing");
    write_field(os, f);
    if (!os) throw format_error("write failed for '" + path + "'");
}

ScalarField read_field_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw format_error("cannot open '" + path + "'");
    return read_field(is);
}

void write_path(std::ostream& os, const PathGrid& p) {
    os << "torus-path v1 N=" << p.grid.n << " M=" << p.m << "\n";
    for (const ScalarField& s : p.slices) write_field(os, s);
}

PathGrid read_path(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw format_error("torus-path: missing header");
    std::istringstream ls(line);
    std::string word, version, ntag, mtag;
    ls >> word >> version >> ntag >> mtag;
    if (word != "torus-path" || version != "v1" || ntag.rfind("N=", 0) != 0 ||
        mtag.rfind("M=", 0) != 0)
        throw format_error("torus-path: bad header '" + line + "'");
    int n = 0, m = 0;
    try {
        n = std::stoi(ntag.substr(2));
        m = std::stoi(mtag.substr(2));
    } catch (const std::exception&) {
        throw format_error("torus-path: bad N/M in header '" + line + "'");
    }
    PathGrid p = PathGrid::make(GridSpec::make(n), m);
    for (int j = 0; j <= m; ++j) {
        ScalarField s = read_field(is);
        if (s.n() != n) throw format_error("torus-path: slice grid does not match header");
        p.slices[j] = std::move(s);
    }
    return p;
}

void write_path_file(const std::string& path, const PathGrid& p) {
    std::ofstream os(path);
    if (!os) throw format_error("cannot open '" + path + "' for writing");
    write_path(os, p);
    if (!os) throw format_error("write failed for '" + path + "'");
}

PathGrid read_path_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw format_error("cannot open '" + path + "'");
    return read_path(is);
}

} // namespace kgeo
