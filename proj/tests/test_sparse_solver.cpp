#include "helpers.hpp"

#include "mscv/solver.hpp"

#include <doctest.h>

using namespace mscv;

namespace {

// 1D Laplacian (SPD, tridiagonal) of size n
CsrMatrix laplace(int n) {
  std::vector<Entry> e;
  for (int i = 0; i < n; ++i) {
    e.push_back({i, i, 2.0});
    if (i > 0) e.push_back({i, i - 1, -1.0});
    if (i + 1 < n) e.push_back({i, i + 1, -1.0});
  }
  return CsrMatrix::from_entries(n, n, e);
}

}  // namespace

TEST_SUITE("sparse_solver") {

TEST_CASE("from_entries sums duplicates and sorts columns") {
  const CsrMatrix A = CsrMatrix::from_entries(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}});
  CHECK(A.nnz() == 3);
  CHECK(A.coeff(0, 2) == 1.5);
  CHECK(A.coeff(0, 1) == 0.0);
  CHECK(A.find(0, 1) == -1);
  CHECK(A.col_index()[0] == 0);
  CHECK(A.max_row_nnz() == 2);
}

TEST_CASE("pattern and atomic add") {
  CsrMatrix A = CsrMatrix::from_pattern(3, {{2, 0}, {1}, {0, 1, 2}});
  A.atomic_add(0, 2, 3.0);
  A.atomic_add(0, 2, 1.0);
  CHECK(A.coeff(0, 2) == 4.0);
  CHECK_THROWS_AS(A.atomic_add(1, 0, 1.0), Error);
}

TEST_CASE("serial and parallel products agree") {
  std::mt19937_64 rng(4);
  const CsrMatrix A = laplace(500);
  const Eigen::VectorXd x = testing::random_vector(500, rng);
  Eigen::VectorXd ys, yp;
  A.multiply(x, ys, Exec::Serial);
  A.multiply(x, yp, Exec::Parallel);
  CHECK((ys - yp).norm() == 0.0);
  CHECK((ys - A.to_dense() * x).norm() < 1e-12);
  CHECK(dot(x, ys, Exec::Serial) == doctest::Approx(dot(x, ys, Exec::Parallel)).epsilon(1e-14));
  CHECK(A.asymmetry() == 0.0);
}

TEST_CASE("solvers agree on an SPD system") {
  std::mt19937_64 rng(8);
  const CsrMatrix A = laplace(300);
  const Eigen::VectorXd b = testing::random_vector(300, rng);
  const Eigen::VectorXd ref = A.to_dense().llt().solve(b);
  for (SolverKind k : {SolverKind::Dense, SolverKind::CG, SolverKind::SparseCholesky, SolverKind::Auto}) {
    SolveOptions o;
    o.kind = k;
    o.max_iter = 1000;
    const SolveReport r = solve_spd(A, b, o);
    CHECK(r.converged);
    CHECK((r.x - ref).norm() < 1e-8 * ref.norm());
  }
  const SolveReport cg = conjugate_gradient(A, b, 1e-12, 1000, Exec::Serial);
  CHECK(cg.residual <= 1e-12);
  CHECK(cg.iterations > 0);
}

TEST_CASE("zero right-hand side") {
  const SolveReport r = conjugate_gradient(laplace(10), Eigen::VectorXd::Zero(10), 1e-12, 10);
  CHECK(r.converged);
  CHECK(r.x.norm() == 0.0);
}

TEST_CASE("indefinite matrices are rejected") {
  CsrMatrix A = laplace(20);
  A.atomic_add(5, 5, -10.0);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(20);
  for (SolverKind k : {SolverKind::Dense, SolverKind::CG, SolverKind::SparseCholesky}) {
    SolveOptions o;
    o.kind = k;
    o.max_iter = 200;
    CHECK_THROWS_WITH_AS(solve_spd(A, b, o), doctest::Contains("positive definite"), Error);
  }
}

TEST_CASE("non-convergence is reported when no fallback is allowed") {
  SolveOptions o;
  o.kind = SolverKind::CG;
  o.max_iter = 3;
  CHECK_THROWS_WITH_AS(solve_spd(laplace(200), Eigen::VectorXd::Ones(200), o), doctest::Contains("did not converge"), Error);
  o.kind = SolverKind::Auto;
  o.dense_limit = 0;
  const SolveReport r = solve_spd(laplace(200), Eigen::VectorXd::Ones(200), o);
  CHECK(r.fell_back);
  CHECK(r.residual < 1e-12);
}

TEST_CASE("operator CG on a semidefinite consistent system") {
  // periodic Laplacian: kernel = constants; b has zero mean
  const int n = 64;
  const LinearOperator A = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.resize(n);
    for (int i = 0; i < n; ++i) y[i] = 2 * x[i] - x[(i + 1) % n] - x[(i + n - 1) % n];
  };
  std::mt19937_64 rng(2);
  Eigen::VectorXd b = testing::random_vector(n, rng);
  b.array() -= b.mean();
  const SolveReport r = conjugate_gradient(A, b, 1e-12, 500);
  CHECK(r.converged);
  CHECK(std::abs(r.x.mean()) < 1e-10);
}

}  // TEST_SUITE
