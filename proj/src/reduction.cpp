#include "mscv/reduction.hpp"

#include "mscv/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace mscv {

LocalFactor::LocalFactor(const Eigen::MatrixXd& A) : llt_(A) {
  const double scale = A.cwiseAbs().maxCoeff();
  bool ok = llt_.info() == Eigen::Success;
  if (ok) {
    const auto L = llt_.matrixLLT().diagonal();
    ok = L.cwiseAbs2().minCoeff() > 1e-12 * scale;
  }
  if (!ok) {
    lu_.compute(A);
    if (!lu_.isInvertible()) throw Error("singular stress block: degenerate mesh or material");
    pivoted_ = true;
  }
}

Eigen::MatrixXd LocalFactor::solve(const Eigen::MatrixXd& B) const {
  if (pivoted_) return lu_.solve(B);
  return llt_.solve(B);
}

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& ids, int offset = 0) {
  Eigen::VectorXd out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = v[offset + ids[i]];
  return out;
}

}  // namespace

CellCenteredSystem eliminate_stress(VertexBlockSystem blocks_in, Exec exec) {
  auto blocks = std::make_shared<const VertexBlockSystem>(std::move(blocks_in));
  const DofLayout& L = blocks->layout;
  CellCenteredSystem sys;
  sys.blocks = blocks;
  sys.num_disp = L.num_disp();
  sys.num_rot = L.num_rot();
  const int n = sys.num_disp + sys.num_rot;
  const int nreg = static_cast<int>(blocks->blocks.size());

  std::vector<std::vector<int>> locals(nreg);
  std::vector<std::vector<int>> pattern(n);
  for (int r = 0; r < nreg; ++r) {
    const RegionBlock& b = blocks->blocks[r];
    auto& ids = locals[r];
    ids = b.disp_dofs;
    for (int g : b.rot_dofs) ids.push_back(sys.num_disp + g);
    for (int i : ids) pattern[i].insert(pattern[i].end(), ids.begin(), ids.end());
  }
  sys.matrix = CsrMatrix::from_pattern(n, std::move(pattern));
  sys.rhs = Eigen::VectorXd::Zero(n);
  sys.rhs.head(sys.num_disp) = blocks->F;
  sys.factors.resize(nreg);

  for_range(nreg, exec, [&](int r) {
    const RegionBlock& b = blocks->blocks[r];
    sys.factors[r] = LocalFactor(b.A_ss);
    Eigen::MatrixXd Bm(b.A_su.rows() + b.A_sg.rows(), b.A_ss.cols());
    Bm << b.A_su, b.A_sg;
    const Eigen::MatrixXd X = sys.factors[r].solve(Bm.transpose());
    const Eigen::MatrixXd K = Bm * X;
    const Eigen::VectorXd y = X.transpose() * gather(blocks->G, b.stress_dofs);
    const auto& ids = locals[r];
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) sys.matrix.atomic_add(ids[i], ids[j], K(i, j));
      double& slot = sys.rhs[ids[i]];
#pragma omp atomic
      slot += y[i];
    }
  });
  return sys;
}

CellCenteredSystem eliminate_rotation(CellCenteredSystem sys, Exec exec) {
  if (sys.rotation_eliminated) throw Error("rotation already eliminated");
  const DofLayout& L = sys.blocks->layout;
  if (!rotation_on_regions(L.method)) throw Error("eliminate_rotation needs a region-wise rotation space");
  const int nd = sys.num_disp, rc = L.rotation_comps, nunits = L.num_rotation_units;
  const CsrMatrix& K = sys.matrix;
  const auto& rp = K.row_ptr();
  const auto& ci = K.col_index();
  const auto& kv = K.values();

  // K_uu keeps its pattern: cells coupled through a rotation unit already share a vertex.
  std::vector<std::vector<int>> pattern(nd);
  std::vector<Entry> coupling;
  for (int i = 0; i < nd; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] < nd) pattern[i].push_back(ci[k]);
  for (int i = nd; i < K.rows(); ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] < nd) coupling.push_back({i - nd, ci[k], kv[k]});
  CellCenteredSystem out;
  out.blocks = sys.blocks;
  out.factors = std::move(sys.factors);
  out.num_disp = nd;
  out.num_rot = 0;
  out.rotation_eliminated = true;
  out.rot_coupling = CsrMatrix::from_entries(sys.num_rot, nd, std::move(coupling));
  out.rot_rhs = sys.rhs.tail(sys.num_rot);
  out.rot_inv.resize(nunits);
  out.matrix = CsrMatrix::from_pattern(nd, std::move(pattern));
  for (int i = 0; i < nd; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] < nd) out.matrix.atomic_add(i, ci[k], kv[k]);
  out.rhs = sys.rhs.head(nd);

  const CsrMatrix& C = out.rot_coupling;
  for_range(nunits, exec, [&](int u) {
    Eigen::MatrixXd G(rc, rc);
    std::vector<int> cols;
    for (int a = 0; a < rc; ++a) {
      const int row = nd + L.rot_dof(u, a);
      for (int k = rp[row]; k < rp[row + 1]; ++k) {
        if (ci[k] < nd) continue;
        const int b = ci[k] - nd - L.rot_dof(u, 0);
        if (b < 0 || b >= rc) throw Error("rotation block couples distinct units");
      }
      for (int b = 0; b < rc; ++b) G(a, b) = K.coeff(row, nd + L.rot_dof(u, b));
      const int cr = L.rot_dof(u, a);
      for (int k = C.row_ptr()[cr]; k < C.row_ptr()[cr + 1]; ++k) cols.push_back(C.col_index()[k]);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success || G.norm() == 0.0)
      throw Error("zero rotation Schur block at unit " + std::to_string(u));
    const Eigen::MatrixXd Ginv = llt.solve(Eigen::MatrixXd::Identity(rc, rc));
    out.rot_inv[u] = Ginv;
    Eigen::MatrixXd Kgu(rc, cols.size());
    Eigen::VectorXd bg(rc);
    for (int a = 0; a < rc; ++a) {
      const int cr = L.rot_dof(u, a);
      for (std::size_t j = 0; j < cols.size(); ++j) Kgu(a, j) = C.coeff(cr, cols[j]);
      bg[a] = out.rot_rhs[cr];
    }
    const Eigen::MatrixXd W = Ginv * Kgu;
    const Eigen::MatrixXd S = Kgu.transpose() * W;
    const Eigen::VectorXd db = W.transpose() * bg;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) out.matrix.atomic_add(cols[i], cols[j], -S(i, j));
      double& slot = out.rhs[cols[i]];
#pragma omp atomic
      slot -= db[i];
    }
  });
  return out;
}

SolveReport solve_spd(const CellCenteredSystem& sys, const SolveOptions& opts) {
  return solve_spd(sys.matrix, sys.rhs, opts);
}

McsvSolution recover_fields(const CellCenteredSystem& sys, const SubMesh& sub, const Eigen::VectorXd& x) {
  const VertexBlockSystem& B = *sys.blocks;
  const DofLayout& L = B.layout;
  if (x.size() != sys.size()) throw Error("recover_fields: solution size mismatch");
  McsvSolution sol;
  sol.layout = L;
  sol.disp = x.head(sys.num_disp);
  if (sys.rotation_eliminated) {
    Eigen::VectorXd r = sys.rot_rhs - sys.rot_coupling * sol.disp;
    sol.rot.resize(L.num_rot());
    const int rc = L.rotation_comps;
    for (int u = 0; u < L.num_rotation_units; ++u)
      sol.rot.segment(L.rot_dof(u, 0), rc) = sys.rot_inv[u] * r.segment(L.rot_dof(u, 0), rc);
  } else {
    sol.rot = x.segment(sys.num_disp, sys.num_rot);
  }
  sol.stress = Eigen::VectorXd::Zero(L.num_stress());
  for_range(static_cast<int>(B.blocks.size()), Exec::Parallel, [&](int r) {
    const RegionBlock& b = B.blocks[r];
    const Eigen::VectorXd rhs = gather(B.G, b.stress_dofs) - b.A_su.transpose() * gather(sol.disp, b.disp_dofs) -
                                b.A_sg.transpose() * gather(sol.rot, b.rot_dofs);
    const Eigen::VectorXd s = sys.factors[r].solve(rhs);
    for (std::size_t i = 0; i < b.stress_dofs.size(); ++i) sol.stress[b.stress_dofs[i]] = s[i];
  });
  sol.sigma = stress_on_subcells(sub, L, sol.stress);
  return sol;
}

double unreduced_residual(const VertexBlockSystem& B, const McsvSolution& sol) {
  const DofLayout& L = B.layout;
  Eigen::VectorXd rs = B.G, ru = -B.F, rg = Eigen::VectorXd::Zero(L.num_rot());
  for (const RegionBlock& b : B.blocks) {
    const Eigen::VectorXd s = gather(sol.stress, b.stress_dofs);
    const Eigen::VectorXd v = b.A_ss * s + b.A_su.transpose() * gather(sol.disp, b.disp_dofs) +
                              b.A_sg.transpose() * gather(sol.rot, b.rot_dofs);
    for (std::size_t i = 0; i < b.stress_dofs.size(); ++i) rs[b.stress_dofs[i]] -= v[i];
    const Eigen::VectorXd bu = b.A_su * s, bg = b.A_sg * s;
    for (std::size_t i = 0; i < b.disp_dofs.size(); ++i) ru[b.disp_dofs[i]] -= bu[i];
    for (std::size_t i = 0; i < b.rot_dofs.size(); ++i) rg[b.rot_dofs[i]] -= bg[i];
  }
  const double nrhs = std::sqrt(B.G.squaredNorm() + B.F.squaredNorm());
  const double res = std::sqrt(rs.squaredNorm() + ru.squaredNorm() + rg.squaredNorm());
  return nrhs > 0.0 ? res / nrhs : res;
}

ElasticityRun solve_elasticity(const SubMesh& sub, const MaterialField& mat, Method method, const VectorField& f,
                               const VectorField& g, const SolveOptions& opts, RhsOptions rhs_opts) {
  const DofLayout L = build_dof_layout(sub, method);
  VertexBlockSystem blocks = assemble_blocks(sub, mat, L, variant_of(method), opts.exec);
  LoadVectors rhs = assemble_rhs(sub, L, f, g, rhs_opts);
  blocks.F = std::move(rhs.F);
  blocks.G = std::move(rhs.G);
  CellCenteredSystem sys = eliminate_stress(std::move(blocks), opts.exec);
  if (rotation_on_regions(method)) sys = eliminate_rotation(std::move(sys), opts.exec);
  ElasticityRun run;
  run.system_size = sys.size();
  run.max_row_nnz = sys.matrix.max_row_nnz();
  run.matrix_asymmetry = sys.matrix.asymmetry();
  for (const auto& fct : sys.factors) run.pivoted_blocks += fct.pivoted();
  run.report = solve_spd(sys, opts);
  run.solution = recover_fields(sys, sub, run.report.x);
  return run;
}

}  // namespace mscv
