#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "adabb/types.hpp"

namespace adabb {

// Compressed-row sparse matrix.  Column indices are 0-based internally and
// strictly increasing within each row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> offsets;  // size rows + 1
  std::vector<int> col_idx;
  std::vector<double> values;

  Vector multiply(const Vector& x) const;            // A x
  Vector multiply_transpose(const Vector& v) const;  // A^T v
  double row_dot(int i, const Vector& x) const;      // a_i^T x

  Matrix to_dense() const;
  static SparseMatrix from_dense(const Matrix& A, double drop_tol = 0.0);
};

struct Dataset {
  SparseMatrix features;
  Vector labels;  // entries in {0,1}
  std::string name;
  std::map<std::string, std::string> meta;  // records the raw-label mapping
};

// LIBSVM line format: `<label> <index>:<value> ...`, 1-based strictly
// increasing indices, blank lines and lines starting with '#' skipped.
// Raw labels are mapped to {0,1}: with two distinct raw labels the smaller
// maps to 0 (so {-1,+1} -> {0,1} and {1,2} -> {0,1}, and {0,1} passes
// through); a single raw label maps to 1 if positive, else 0.
// cols_override fixes the feature count when trailing features are all-zero.
Dataset parse_libsvm(std::istream& in, const std::string& name = "",
                     int cols_override = -1);

// Reads a file, transparently inflating gzip input (by magic bytes) when
// zlib support is built in.
Dataset load_libsvm_file(const std::string& path, int cols_override = -1);

std::string serialize_libsvm(const Dataset& ds);

}  // namespace adabb
