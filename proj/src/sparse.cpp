#include "mscv/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace mscv {

CsrMatrix CsrMatrix::from_entries(int rows, int cols, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  CsrMatrix A(rows, cols);
  for (std::size_t k = 0; k < entries.size();) {
    const Entry& e = entries[k];
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) throw Error("sparse entry out of range");
    double v = 0.0;
    std::size_t j = k;
    while (j < entries.size() && entries[j].row == e.row && entries[j].col == e.col) v += entries[j++].value;
    A.col_.push_back(e.col);
    A.val_.push_back(v);
    ++A.row_ptr_[e.row + 1];
    k = j;
  }
  for (int i = 0; i < rows; ++i) A.row_ptr_[i + 1] += A.row_ptr_[i];
  return A;
}

CsrMatrix CsrMatrix::from_pattern(int cols, std::vector<std::vector<int>> pattern) {
  CsrMatrix A(static_cast<int>(pattern.size()), cols);
  for (int i = 0; i < A.rows_; ++i) {
    auto& p = pattern[i];
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    A.row_ptr_[i + 1] = A.row_ptr_[i] + static_cast<int>(p.size());
    A.col_.insert(A.col_.end(), p.begin(), p.end());
  }
  A.val_.assign(A.col_.size(), 0.0);
  return A;
}

int CsrMatrix::max_row_nnz() const {
  int m = 0;
  for (int i = 0; i < rows_; ++i) m = std::max(m, row_nnz(i));
  return m;
}

long long CsrMatrix::find(int i, int j) const {
  const auto b = col_.begin() + row_ptr_[i], e = col_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  return it != e && *it == j ? it - col_.begin() : -1;
}

double CsrMatrix::coeff(int i, int j) const {
  const long long k = find(i, j);
  return k < 0 ? 0.0 : val_[k];
}

void CsrMatrix::atomic_add(int i, int j, double v) {
  const long long k = find(i, j);
  if (k < 0) throw Error("atomic_add outside sparsity pattern");
  double& slot = val_[k];
#pragma omp atomic
  slot += v;
}

void CsrMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec) const {
  y.resize(rows_);
  if (exec == Exec::Serial) {
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
      y[i] = s;
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

Eigen::VectorXd CsrMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd CsrMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(rows_);
  for (int i = 0; i < std::min(rows_, cols_); ++i) d[i] = coeff(i, i);
  return d;
}

double CsrMatrix::asymmetry() const {
  double amax = 0.0, dmax = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      amax = std::max(amax, std::abs(val_[k]));
      dmax = std::max(dmax, std::abs(val_[k] - coeff(col_[k], i)));
    }
  return amax > 0.0 ? dmax / amax : 0.0;
}

Eigen::SparseMatrix<double> CsrMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(val_.size());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.emplace_back(i, col_[k], val_[k]);
  Eigen::SparseMatrix<double> S(rows_, cols_);
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) D(i, col_[k]) += val_[k];
  return D;
}

double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Exec exec) {
  const int n = static_cast<int>(a.size());
  double s = 0.0;
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace mscv
