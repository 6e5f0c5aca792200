#pragma once

#include "mscv/common.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace mscv {

struct Entry {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with sorted column indices.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Duplicates are summed.
  static CsrMatrix from_entries(int rows, int cols, std::vector<Entry> entries);
  /// Zero matrix with the given column set per row (need not be sorted).
  static CsrMatrix from_pattern(int cols, std::vector<std::vector<int>> pattern);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long long nnz() const { return static_cast<long long>(col_.size()); }
  int row_nnz(int i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  int max_row_nnz() const;

  /// Position of (i, j) in the value array, or -1 when outside the pattern.
  long long find(int i, int j) const;
  double coeff(int i, int j) const;
  /// Adds v at (i, j); the entry must exist. Safe under concurrent callers.
  void atomic_add(int i, int j, double v);

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec = Exec::Parallel) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;
  /// max |a_ij - a_ji| / max |a_ij|
  double asymmetry() const;

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_index() const { return col_; }
  std::vector<double>& values() { return val_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Exec exec);

}  // namespace mscv
