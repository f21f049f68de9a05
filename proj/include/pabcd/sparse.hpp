#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pabcd {

using index_t = std::int64_t;

/// Malformed input file (bad token, bad index ordering, ...). The message
/// carries the offending line number when one is known.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntactically valid file in a dialect this reader does not handle.
struct UnsupportedFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compressed sparse column matrix. Immutable once built; every solver
/// kernel in this project is a column operation, so CSC is the only layout.
///
/// Invariants: col_ptr is nondecreasing with col_ptr[0] == 0 and
/// col_ptr[cols] == nnz; row indices are strictly increasing within each
/// column; row_nnz[r] counts the stored entries of row r.
struct SparseMatrix {
  index_t rows = 0;
  index_t cols = 0;
  std::vector<index_t> col_ptr;   // length cols + 1
  std::vector<index_t> row_idx;   // length nnz
  std::vector<double> values;     // length nnz
  std::vector<index_t> row_nnz;   // length rows, derived at build time

  index_t nnz() const { return static_cast<index_t>(values.size()); }

  std::span<const index_t> col_rows(index_t j) const {
    return {row_idx.data() + col_ptr[j],
            static_cast<std::size_t>(col_ptr[j + 1] - col_ptr[j])};
  }
  std::span<const double> col_values(index_t j) const {
    return {values.data() + col_ptr[j],
            static_cast<std::size_t>(col_ptr[j + 1] - col_ptr[j])};
  }

  /// Build from unordered (row, col, value) triplets. Duplicate coordinates
  /// are summed (the Matrix Market convention).
  static SparseMatrix from_triplets(index_t rows, index_t cols,
                                    std::vector<index_t> ti,
                                    std::vector<index_t> tj,
                                    std::vector<double> tv);
};

/// Largest number of stored entries in any row; 0 for an all-zero matrix.
index_t max_row_nnz(const SparseMatrix& a);

struct LibsvmData {
  SparseMatrix matrix;  // samples as rows, transposed into CSC
  std::vector<double> labels;
};

/// Read a libsvm/svmlight text file: `label idx:val ...` per line with
/// 1-based strictly increasing indices. Labels are kept verbatim as the
/// regression target. Column count is the largest feature index seen.
LibsvmData load_libsvm(const std::string& path);

/// Read a `matrix coordinate real general` Matrix Market file.
/// Duplicate entries are summed; any other header is rejected.
SparseMatrix load_matrix_market(const std::string& path);

/// Write in Matrix Market coordinate form, column order, full precision, so
/// that a reload reproduces (col_ptr, row_idx, values) exactly.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

}  // namespace pabcd
