#include "mscv/extensions.hpp"
#include "mscv/parallel.hpp"
#include "mscv/quadrature.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include <cmath>

namespace mscv {

namespace {

Vec3 cell_mass_center(const SubMesh& sub, int c, double* measure = nullptr) {
  Vec3 x = Vec3::Zero();
  double m = 0.0;
  for (int k = 0; k < sub.subcells_per_cell(); ++k) {
    const Subcell& sc = sub.subcells[sub.subcell_of(c, k)];
    x += sc.measure * sc.centroid;
    m += sc.measure;
  }
  if (measure) *measure = m;
  return x / m;
}

}  // namespace

StokesSolution solve_stokes(const SubMesh& sub, const VectorField& f, const StokesOptions& opts) {
  if (sub.dim() != 2) throw Error("solve_stokes: 2D meshes only");
  const int d = 2;
  const int nc = sub.macro.num_cells();
  const int nv = sub.num_regions();
  const int nu = d * nc;

  std::vector<RegionFluxBlock> blocks(nv);
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llt(nv);
  for_range(nv, Exec::Parallel, [&](int r) {
    blocks[r] = region_flux_block(sub, r);
    llt[r].compute(blocks[r].mass);
    if (llt[r].info() != Eigen::Success) throw Error("gradient mass matrix not positive definite at vertex " + std::to_string(r));
  });

  std::vector<Entry> ke;
  for (int r = 0; r < nv; ++r) {
    const RegionFluxBlock& b = blocks[r];
    const Eigen::MatrixXd K = b.div * llt[r].solve(b.div.transpose());
    for (size_t i = 0; i < b.cells.size(); ++i)
      for (size_t j = 0; j < b.cells.size(); ++j)
        for (int c = 0; c < d; ++c) ke.push_back({d * b.cells[i] + c, d * b.cells[j] + c, K(i, j)});
  }
  std::vector<Entry> pe;
  for (int e = 0; e < sub.num_half_facets(); ++e) {
    const HalfFacet& hf = sub.half_facets[e];
    for (int side = 0; side < 2; ++side) {
      if (hf.cells[side] < 0) continue;
      const double sg = side == 0 ? 1.0 : -1.0;
      for (int c = 0; c < d; ++c) pe.push_back({d * hf.cells[side] + c, hf.vertex, sg * hf.normal[c] * hf.measure});
    }
  }
  const CsrMatrix K = CsrMatrix::from_entries(nu, nu, ke);
  const CsrMatrix P = CsrMatrix::from_entries(nu, nv, pe);
  const Eigen::SparseMatrix<double> Ps = P.to_eigen();

  Eigen::VectorXd weights(nv);
  for (int v = 0; v < nv; ++v) {
    weights[v] = 0.0;
    for (int s : sub.regions[v].subcells) weights[v] += sub.subcells[s].measure;
  }

  StokesSolution sol;
  if (opts.gauge == Gauge::None) {
    const Eigen::VectorXd pc = Ps * Eigen::VectorXd::Ones(nv);
    if (pc.norm() <= 1e-12 * std::max(1.0, Ps.norm()))
      throw Error("singular pressure gauge: constant pressures are in the kernel of the coupled system");
  }

  Eigen::VectorXd F = Eigen::VectorXd::Zero(nu);
  if (f) {
    for (int c = 0; c < nc; ++c) {
      if (opts.body_points == 0) {
        const Vec3 fx = f(sub.macro.cell_center(c)) * sub.macro.cell_measure(c);
        for (int r = 0; r < d; ++r) F[d * c + r] = fx[r];
        continue;
      }
      for (int k = 0; k < sub.subcells_per_cell(); ++k)
        for_each_subcell_point(sub, sub.subcell_of(c, k), opts.body_points, [&](const Vec3& x, double w) {
          const Vec3 fx = f(x);
          for (int r = 0; r < d; ++r) F[d * c + r] += w * fx[r];
        });
    }
  }

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> kf(K.to_eigen());
  if (kf.info() != Eigen::Success) throw Error("velocity matrix not positive definite");

  // S p = P^T K^-1 F with S = P^T K^-1 P, semidefinite; CG from zero stays
  // orthogonal to its kernel.
  const Eigen::VectorXd KiF = kf.solve(F);
  const Eigen::VectorXd rhs = Ps.transpose() * KiF;
  const LinearOperator S = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const Eigen::VectorXd t = Ps * x;
    y = Ps.transpose() * kf.solve(t);
  };
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(50.0 * std::sqrt(double(nv))) + 50;
  const SolveReport rep = conjugate_gradient(S, rhs, opts.tol, max_iter);
  if (!rep.converged)
    throw Error("pressure Schur complement CG did not converge (residual " + std::to_string(rep.residual) + ")");
  sol.iterations = rep.iterations;
  sol.schur_residual = rep.residual;
  sol.pressure = rep.x;
  sol.velocity = kf.solve(F - Ps * sol.pressure);
  sol.pressure.array() -= weights.dot(sol.pressure) / weights.sum();
  sol.divergence = (Ps.transpose() * sol.velocity).cwiseAbs().maxCoeff();

  sol.gradient = Eigen::VectorXd::Zero(d * sub.num_half_facets());
  for_range(nv, Exec::Parallel, [&](int r) {
    const RegionFluxBlock& b = blocks[r];
    Eigen::MatrixXd ul(b.cells.size(), d);
    for (size_t i = 0; i < b.cells.size(); ++i)
      for (int c = 0; c < d; ++c) ul(i, c) = sol.velocity[d * b.cells[i] + c];
    const Eigen::MatrixXd w = -llt[r].solve(b.div.transpose() * ul);
    for (size_t j = 0; j < b.half_facets.size(); ++j)
      for (int c = 0; c < d; ++c) sol.gradient[d * b.half_facets[j] + c] = w(j, c);
  });
  sol.gradient_cells = stress_on_subcells(sub, build_dof_layout(sub, Method::Method1), sol.gradient);

  const int n = nu + nv + 1;
  if (n <= opts.singular_value_limit) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    M.topLeftCorner(nu, nu) = K.to_dense();
    const Eigen::MatrixXd Pd = P.to_dense();
    M.block(0, nu, nu, nv) = Pd;
    M.block(nu, 0, nv, nu) = Pd.transpose();
    M.block(nu, nu + nv, nv, 1) = weights;
    M.block(nu + nv, nu, 1, nv) = weights.transpose();
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(M).singularValues();
    sol.min_singular_value = sv[n - 1];
    sol.pressure_kernel = static_cast<int>((sv.array() < 1e-10 * sv[0]).count());
  }
  return sol;
}

double stokes_B(const SubMesh& sub, const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  const int d = sub.dim();
  double s = 0.0;
  for (int e = 0; e < sub.num_half_facets(); ++e) {
    const HalfFacet& hf = sub.half_facets[e];
    for (int r = 0; r < d; ++r) {
      const double jump = v[d * hf.cells[0] + r] - (hf.cells[1] >= 0 ? v[d * hf.cells[1] + r] : 0.0);
      s -= w[d * e + r] * jump;
    }
  }
  return s;
}

double stokes_B_star(const SubMesh& sub, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  const int d = sub.dim();
  const std::vector<Mat3> wc = stress_on_subcells(sub, build_dof_layout(sub, Method::Method1), w);
  double s = 0.0;
  for (const DualFacet& df : sub.dual_facets) {
    const Vec3 jump = (wc[df.subcells[0]] - wc[df.subcells[1]]) * df.normal;
    for (int r = 0; r < d; ++r) s += v[d * df.cell + r] * jump[r] * df.measure;
  }
  return s;
}

double stokes_b_star(const SubMesh& sub, const Eigen::VectorXd& q, const Eigen::VectorXd& v) {
  const int d = sub.dim();
  double s = 0.0;
  for (int e = 0; e < sub.num_half_facets(); ++e) {
    const HalfFacet& hf = sub.half_facets[e];
    for (int r = 0; r < d; ++r) {
      const double jump = v[d * hf.cells[0] + r] - (hf.cells[1] >= 0 ? v[d * hf.cells[1] + r] : 0.0);
      s += q[hf.vertex] * jump * hf.normal[r] * hf.measure;
    }
  }
  return s;
}

double stokes_b(const SubMesh& sub, const Eigen::VectorXd& v, const Eigen::VectorXd& q) {
  const int d = sub.dim();
  double s = 0.0;
  for (const DualFacet& df : sub.dual_facets) {
    const double jump = q[sub.subcells[df.subcells[0]].vertex] - q[sub.subcells[df.subcells[1]].vertex];
    double vn = 0.0;
    for (int r = 0; r < d; ++r) vn += v[d * df.cell + r] * df.normal[r];
    s -= vn * jump * df.measure;
  }
  return s;
}

double stokes_velocity_error(const StokesSolution& sol, const SubMesh& sub, const VectorField& u) {
  const int d = sub.dim();
  double e = 0.0, n = 0.0;
  for (int c = 0; c < sub.macro.num_cells(); ++c) {
    double m = 0.0;
    const Vec3 ux = u(cell_mass_center(sub, c, &m));
    for (int r = 0; r < d; ++r) {
      const double diff = ux[r] - sol.velocity[d * c + r];
      e += m * diff * diff;
      n += m * ux[r] * ux[r];
    }
  }
  return n > 0.0 ? std::sqrt(e / n) : std::sqrt(e);
}

}  // namespace mscv
