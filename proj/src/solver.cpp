#include "mscv/solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace mscv {

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Dense: return "dense";
    case SolverKind::CG: return "cg";
    case SolverKind::SparseCholesky: return "sparse-cholesky";
  }
  return "?";
}

namespace {

double relative_residual(const CsrMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b, Exec exec) {
  Eigen::VectorXd r;
  A.multiply(x, r, exec);
  const double nb = b.norm();
  return nb > 0.0 ? (b - r).norm() / nb : (b - r).norm();
}

}  // namespace

SolveReport conjugate_gradient(const CsrMatrix& A, const Eigen::VectorXd& b, double tol, int max_iter, Exec exec) {
  const int n = A.rows();
  SolveReport rep;
  rep.used = SolverKind::CG;
  rep.x = Eigen::VectorXd::Zero(n);
  const double nb = std::sqrt(dot(b, b, exec));
  if (nb == 0.0) {
    rep.converged = true;
    return rep;
  }
  Eigen::VectorXd dinv = A.diagonal();
  for (int i = 0; i < n; ++i) {
    if (!(dinv[i] > 0.0)) throw Error("matrix not positive definite: diagonal entry " + std::to_string(i) + " <= 0");
    dinv[i] = 1.0 / dinv[i];
  }
  Eigen::VectorXd r = b, z = dinv.cwiseProduct(r), p = z, q(n);
  double rz = dot(r, z, exec);
  for (int it = 1; it <= max_iter; ++it) {
    A.multiply(p, q, exec);
    const double pq = dot(p, q, exec);
    if (!(pq > 0.0)) throw Error("matrix not positive definite: p.Ap <= 0 in CG");
    const double alpha = rz / pq;
    rep.x += alpha * p;
    r -= alpha * q;
    rep.iterations = it;
    if (std::sqrt(dot(r, r, exec)) <= tol * nb) {
      // confirm against the true residual
      rep.residual = relative_residual(A, rep.x, b, exec);
      if (rep.residual <= tol) {
        rep.converged = true;
        return rep;
      }
      A.multiply(rep.x, q, exec);
      r = b - q;
    }
    z = dinv.cwiseProduct(r);
    const double rz1 = dot(r, z, exec);
    p = z + (rz1 / rz) * p;
    rz = rz1;
  }
  rep.residual = relative_residual(A, rep.x, b, exec);
  rep.converged = rep.residual <= tol;
  return rep;
}

SolveReport conjugate_gradient(const LinearOperator& A, const Eigen::VectorXd& b, double tol, int max_iter) {
  SolveReport rep;
  rep.used = SolverKind::CG;
  rep.x = Eigen::VectorXd::Zero(b.size());
  const double nb = b.norm();
  if (nb == 0.0) {
    rep.converged = true;
    return rep;
  }
  Eigen::VectorXd r = b, p = b, q(b.size());
  double rr = r.squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    A(p, q);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) throw Error("operator not positive semidefinite on the Krylov space");
    const double alpha = rr / pq;
    rep.x += alpha * p;
    r -= alpha * q;
    rep.iterations = it;
    const double rr1 = r.squaredNorm();
    if (std::sqrt(rr1) <= tol * nb) {
      A(rep.x, q);
      rep.residual = (b - q).norm() / nb;
      if (rep.residual <= tol) {
        rep.converged = true;
        return rep;
      }
      r = b - q;
      p = r;
      rr = r.squaredNorm();
      continue;
    }
    p = r + (rr1 / rr) * p;
    rr = rr1;
  }
  A(rep.x, q);
  rep.residual = (b - q).norm() / nb;
  rep.converged = rep.residual <= tol;
  return rep;
}

SolveReport solve_spd(const CsrMatrix& A, const Eigen::VectorXd& b, const SolveOptions& opts) {
  const int n = A.rows();
  if (A.cols() != n || b.size() != n) throw Error("solve_spd: dimension mismatch");
  SolverKind kind = opts.kind;
  if (kind == SolverKind::Auto) kind = n <= opts.dense_limit ? SolverKind::Dense : SolverKind::CG;

  SolveReport rep;
  if (kind == SolverKind::Dense) {
    Eigen::LLT<Eigen::MatrixXd> llt(A.to_dense());
    if (llt.info() != Eigen::Success) throw Error("matrix not positive definite (dense Cholesky failed)");
    rep.x = llt.solve(b);
  } else if (kind == SolverKind::SparseCholesky) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A.to_eigen());
    if (llt.info() != Eigen::Success) throw Error("matrix not positive definite (sparse Cholesky failed)");
    rep.x = llt.solve(b);
  } else {
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(20.0 * std::sqrt(double(n))) + 20;
    rep = conjugate_gradient(A, b, opts.tol, max_iter, opts.exec);
    if (!rep.converged) {
      if (opts.kind != SolverKind::Auto || !opts.fallback)
        throw Error("CG did not converge in " + std::to_string(max_iter) + " iterations (residual " +
                    std::to_string(rep.residual) + ")");
      const int its = rep.iterations;
      SolveOptions direct = opts;
      direct.kind = SolverKind::SparseCholesky;
      rep = solve_spd(A, b, direct);
      rep.iterations = its;
      rep.fell_back = true;
      return rep;
    }
    return rep;
  }
  rep.used = kind;
  rep.residual = relative_residual(A, rep.x, b, opts.exec);
  rep.converged = true;
  return rep;
}

}  // namespace mscv
