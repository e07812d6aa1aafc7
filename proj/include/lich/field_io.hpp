#pragma once

// Plain-text field format.
//
//   # lich-field space=<catalog string> p=<order> class=<symmetry class> res=<N1xN2…> frame=orthonormal
//   <i_1> … <i_d> <c_1> … <c_{n^p}>
//   …
//
// One line per node in node order: the grid multi-index followed by the n^p
// components (row-major multi-index order) in scientific notation with 17
// significant digits, so a write/read round trip is exact.

#include <iosfwd>
#include <string>

#include "lich/fields.hpp"

namespace lich {

void write_field(std::ostream& out, const TensorField& f);
void write_field(const std::string& path, const TensorField& f);

// Malformed input → config error.
TensorField read_field(std::istream& in);
TensorField read_field(const std::string& path);

}  // namespace lich
