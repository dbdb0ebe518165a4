#pragma once

// Plain-text field snapshots and legacy VTK export of the scalar order.

#include <iosfwd>
#include <string>

#include "qmcf/grid.hpp"

namespace qmcf {

/// Header line "QMCF1 dim n1 [n2 [n3]] h t eps", then one line per interior
/// cell (x fastest) with the five coefficients in round-trip decimal form.
void write_snapshot(std::ostream& out, const TensorField& q, double eps);
void write_snapshot_file(const std::string& path, const TensorField& q, double eps);

struct Snapshot {
  TensorField field;  ///< ghosts zero; field.t holds the stored time
  double eps = 0.0;
};
/// DomainError on malformed input. L is recovered as n1 * h / 2.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot_file(const std::string& path);

/// Legacy VTK STRUCTURED_POINTS file with the per-cell degree of orientation s.
void write_vtk_s(const std::string& path, const TensorField& q);

/// Writes content to path through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qmcf
