#pragma once

#include <iosfwd>
#include <string>

#include "kgeo/grid.hpp"
#include "kgeo/path.hpp"

namespace kgeo {

/// Formats a double with 17 significant digits (round-trip exact).
std::string num17(double v);

// "torus-field v1": header line `torus-field v1 N=<N>`, then N lines of
// N whitespace-separated decimal floats; line k holds row k (all l values).
void write_field(std::ostream& os, const ScalarField& f);
ScalarField read_field(std::istream& is);

void write_field_file(const std::string& path, const ScalarField& f);
ScalarField read_field_file(const std::string& path);

// "torus-path v1": header line `torus-path v1 N=<N> M=<M>`, followed by
// M+1 torus-field blocks in slice order.
void write_path(std::ostream& os, const PathGrid& p);
PathGrid read_path(std::istream& is);

void write_path_file(const std::string& path, const PathGrid& p);
PathGrid read_path_file(const std::string& path);

} // namespace kgeo
