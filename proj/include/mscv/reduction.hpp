#pragma once

#include "mscv/assembly.hpp"
#include "mscv/solver.hpp"

#include <memory>

namespace mscv {

/// Factorization of one A_ss block: Cholesky, or pivoted LU when the block
/// is close to singular.
class LocalFactor {
 public:
  LocalFactor() = default;
  explicit LocalFactor(const Eigen::MatrixXd& A);
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;
  bool pivoted() const { return pivoted_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
  bool pivoted_ = false;
};

/*
  Cell-centered unknowns [u; gamma] (gamma absent once eliminated). Keeps the
  region factors and, after eliminate_rotation, the rotation rows needed to
  recover gamma from u.
*/
struct CellCenteredSystem {
  std::shared_ptr<const VertexBlockSystem> blocks;
  std::vector<LocalFactor> factors;
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  int num_disp = 0;
  int num_rot = 0;

  bool rotation_eliminated = false;
  CsrMatrix rot_coupling;                 // K_gu
  std::vector<Eigen::MatrixXd> rot_inv;   // K_gg^{-1} per rotation unit
  Eigen::VectorXd rot_rhs;

  int size() const { return matrix.rows(); }
};

CellCenteredSystem eliminate_stress(VertexBlockSystem blocks, Exec exec = Exec::Parallel);

/// Requires a rotation space that is block-diagonal per unit (Method1 and
/// Method1Scaled).
CellCenteredSystem eliminate_rotation(CellCenteredSystem sys, Exec exec = Exec::Parallel);

SolveReport solve_spd(const CellCenteredSystem& sys, const SolveOptions& opts = {});

McsvSolution recover_fields(const CellCenteredSystem& sys, const SubMesh& sub, const Eigen::VectorXd& x);

/// Residual of the unreduced block equations (stress, displacement and
/// rotation rows stacked), relative to the norm of its right-hand side.
double unreduced_residual(const VertexBlockSystem& blocks, const McsvSolution& sol);

struct ElasticityRun {
  McsvSolution solution;
  SolveReport report;
  int system_size = 0;
  int max_row_nnz = 0;
  double matrix_asymmetry = 0.0;
  int pivoted_blocks = 0;
};

/// Assemble, reduce (rotation too when the method allows it) and solve.
ElasticityRun solve_elasticity(const SubMesh& sub, const MaterialField& mat, Method method, const VectorField& f,
                               const VectorField& g, const SolveOptions& opts = {}, RhsOptions rhs = {});

}  // namespace mscv
