#pragma once

#include "mscv/sparse.hpp"

#include <functional>
#include <string>

namespace mscv {

enum class SolverKind { Auto, Dense, CG, SparseCholesky };

std::string to_string(SolverKind k);

struct SolveOptions {
  double tol = 1e-12;                  // relative residual for CG
  SolverKind kind = SolverKind::Auto;  // Auto: dense up to dense_limit unknowns, else CG
  int dense_limit = 2000;
  int max_iter = 0;                    // 0: 20 sqrt(n)
  bool fallback = true;                // Auto only: sparse Cholesky if CG stalls
  Exec exec = Exec::Parallel;
};

struct SolveReport {
  Eigen::VectorXd x;
  SolverKind used = SolverKind::Auto;
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||
  bool converged = false;
  bool fell_back = false;
};

/// Jacobi-preconditioned conjugate gradients.
SolveReport conjugate_gradient(const CsrMatrix& A, const Eigen::VectorXd& b, double tol, int max_iter,
                               Exec exec = Exec::Parallel);

/// Unpreconditioned CG for an operator y = A x given as a callback. A may be
/// positive semidefinite as long as b lies in its range.
using LinearOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
SolveReport conjugate_gradient(const LinearOperator& A, const Eigen::VectorXd& b, double tol, int max_iter);

/// Solves an SPD system; throws if the matrix is not positive definite or the
/// requested iterative solve does not converge.
SolveReport solve_spd(const CsrMatrix& A, const Eigen::VectorXd& b, const SolveOptions& opts = {});

}  // namespace mscv
