#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "vortexlab/dynamics.hpp"

namespace vortexlab {

/// Shortest decimal text that reads back to the same double (17 significant digits).
std::string format_double(double v);

/// Writes a comma-separated header line followed by numeric rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws InvalidArgument when missing.
  std::size_t column(const std::string& name) const;
};

/// Parses a numeric CSV with a header line. Throws InvalidArgument on ragged
/// rows or unparseable fields.
CsvTable read_csv(std::istream& in);

/// Columns t, x1, y1, ..., xN, yN, H, I, absZ, M, min_pair_dist.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Columns t, rho, beta_12, beta_13, ... in lexicographic pair order.
void write_shape_csv(std::ostream& out, const Trajectory& traj);

/// Reads a trajectory CSV back into states; strengths are not stored in the
/// file and are supplied by the caller.
std::vector<VortexState> read_trajectory_csv(std::istream& in, const std::vector<double>& strengths);

}  // namespace vortexlab
