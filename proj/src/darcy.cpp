#include "mscv/extensions.hpp"
#include "mscv/parallel.hpp"
#include "mscv/quadrature.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace mscv {

RegionFluxBlock region_flux_block(const SubMesh& sub, int region) {
  const InteractionRegion& reg = sub.regions[region];
  RegionFluxBlock b;
  b.region = region;
  b.half_facets = reg.half_facets;
  b.cells = reg.cells;
  const int m = static_cast<int>(b.half_facets.size());
  auto local = [&](const std::vector<int>& v, int x) {
    return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
  };
  b.mass = Eigen::MatrixXd::Zero(m, m);
  for (int s : reg.subcells) {
    const Subcell& sc = sub.subcells[s];
    for (int a = 0; a < sub.dim(); ++a) {
      const int ea = sc.half_facets[a];
      const Vec3 va = flux_dual_basis(sub, ea, s);
      for (int c = 0; c < sub.dim(); ++c) {
        const int ec = sc.half_facets[c];
        b.mass(local(b.half_facets, ea), local(b.half_facets, ec)) += sc.measure * va.dot(flux_dual_basis(sub, ec, s));
      }
    }
  }
  b.div = Eigen::MatrixXd::Zero(b.cells.size(), m);
  for (int j = 0; j < m; ++j) {
    const HalfFacet& hf = sub.half_facets[b.half_facets[j]];
    b.div(local(b.cells, hf.cells[0]), j) = 1.0;
    if (hf.cells[1] >= 0) b.div(local(b.cells, hf.cells[1]), j) = -1.0;
  }
  return b;
}

namespace {

Eigen::VectorXd scalar_load(const SubMesh& sub, const ScalarField& f, int body_points) {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(sub.macro.num_cells());
  if (!f) return F;
  if (body_points == 0) {
    for (int c = 0; c < sub.macro.num_cells(); ++c) F[c] = f(sub.macro.cell_center(c)) * sub.macro.cell_measure(c);
  } else {
    for (int s = 0; s < sub.num_subcells(); ++s)
      for_each_subcell_point(sub, s, body_points, [&](const Vec3& x, double w) { F[sub.subcells[s].cell] += w * f(x); });
  }
  return F;
}

Vec3 facet_center(const MacroMesh& m, int f) {
  const PrimalFacet& pf = m.facets[f];
  const int nv = m.dim == 2 ? 2 : 4;
  Vec3 x = Vec3::Zero();
  for (int k = 0; k < nv; ++k) x += m.vertices[pf.vertices[k]];
  return x / nv;
}

// Boundary functional: integral of g v.n for the flux-dual basis of e.
Eigen::VectorXd boundary_load(const SubMesh& sub, const ScalarField& g) {
  Eigen::VectorXd G = Eigen::VectorXd::Zero(sub.num_half_facets());
  if (!g) return G;
  for (int e = 0; e < sub.num_half_facets(); ++e)
    if (sub.half_facets[e].boundary) G[e] = g(facet_center(sub.macro, sub.half_facets[e].facet));
  return G;
}

void fill_velocity(DarcySolution& sol, const SubMesh& sub) {
  sol.velocity.assign(sub.num_subcells(), Vec3::Zero());
  for (int s = 0; s < sub.num_subcells(); ++s)
    for (int a = 0; a < sub.dim(); ++a) {
      const int e = sub.subcells[s].half_facets[a];
      sol.velocity[s] += sol.flux[e] * flux_dual_basis(sub, e, s);
    }
}

}  // namespace

DarcySolution solve_darcy(const SubMesh& sub, const ScalarField& f, const ScalarField& g, const SolveOptions& opts,
                          int body_points) {
  if (sub.dim() != 2) throw Error("solve_darcy: 2D meshes only");
  const int nr = sub.num_regions();
  const int nc = sub.macro.num_cells();
  const Eigen::VectorXd F = scalar_load(sub, f, body_points);
  const Eigen::VectorXd G = boundary_load(sub, g);

  // A u - B^T p = -G,  B u = F  =>  B A^-1 B^T p = F + B A^-1 G
  std::vector<RegionFluxBlock> blocks(nr);
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llt(nr);
  for_range(nr, opts.exec, [&](int r) {
    blocks[r] = region_flux_block(sub, r);
    llt[r].compute(blocks[r].mass);
    if (llt[r].info() != Eigen::Success) throw Error("velocity mass matrix not positive definite at vertex " + std::to_string(r));
  });
  std::vector<Entry> entries;
  Eigen::VectorXd rhs = F;
  for (int r = 0; r < nr; ++r) {
    const RegionFluxBlock& b = blocks[r];
    const Eigen::MatrixXd AiBt = llt[r].solve(b.div.transpose());
    const Eigen::MatrixXd K = b.div * AiBt;
    Eigen::VectorXd gl(b.half_facets.size());
    for (size_t j = 0; j < b.half_facets.size(); ++j) gl[j] = G[b.half_facets[j]];
    const Eigen::VectorXd kr = AiBt.transpose() * gl;
    for (size_t i = 0; i < b.cells.size(); ++i) {
      rhs[b.cells[i]] += kr[i];
      for (size_t j = 0; j < b.cells.size(); ++j) entries.push_back({b.cells[i], b.cells[j], K(i, j)});
    }
  }
  const CsrMatrix A = CsrMatrix::from_entries(nc, nc, entries);
  DarcySolution sol;
  sol.report = solve_spd(A, rhs, opts);
  sol.pressure = sol.report.x;
  sol.flux = Eigen::VectorXd::Zero(sub.num_half_facets());
  for_range(nr, opts.exec, [&](int r) {
    const RegionFluxBlock& b = blocks[r];
    Eigen::VectorXd pl(b.cells.size()), gl(b.half_facets.size());
    for (size_t i = 0; i < b.cells.size(); ++i) pl[i] = sol.pressure[b.cells[i]];
    for (size_t j = 0; j < b.half_facets.size(); ++j) gl[j] = G[b.half_facets[j]];
    const Eigen::VectorXd u = llt[r].solve(b.div.transpose() * pl - gl);
    for (size_t j = 0; j < b.half_facets.size(); ++j) sol.flux[b.half_facets[j]] = u[j];
  });
  fill_velocity(sol, sub);
  return sol;
}

DarcySolution solve_darcy_saddle(const SubMesh& sub, const ScalarField& f, const ScalarField& g, int body_points) {
  const int ne = sub.num_half_facets();
  const int nc = sub.macro.num_cells();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ne + nc, ne + nc);
  for (int s = 0; s < sub.num_subcells(); ++s) {
    const Subcell& sc = sub.subcells[s];
    for (int a = 0; a < sub.dim(); ++a)
      for (int c = 0; c < sub.dim(); ++c) {
        const int ea = sc.half_facets[a], ec = sc.half_facets[c];
        K(ea, ec) += sc.measure * flux_dual_basis(sub, ea, s).dot(flux_dual_basis(sub, ec, s));
      }
  }
  for (int c = 0; c < nc; ++c)
    for (const CellFacetRef& ref : sub.cell_boundary[c]) {
      K(ne + c, ref.half_facet) += ref.sign;
      K(ref.half_facet, ne + c) -= ref.sign;
    }
  Eigen::VectorXd rhs(ne + nc);
  rhs.head(ne) = -boundary_load(sub, g);
  rhs.tail(nc) = scalar_load(sub, f, body_points);
  const Eigen::VectorXd x = K.fullPivLu().solve(rhs);
  DarcySolution sol;
  sol.flux = x.head(ne);
  sol.pressure = x.tail(nc);
  sol.report.x = x;
  sol.report.used = SolverKind::Dense;
  sol.report.converged = true;
  sol.report.residual = (K * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  fill_velocity(sol, sub);
  return sol;
}

std::vector<double> darcy_mass_balance(const DarcySolution& sol, const SubMesh& sub, const ScalarField& f,
                                       int body_points) {
  const Eigen::VectorXd F = scalar_load(sub, f, body_points);
  std::vector<double> res(sub.macro.num_cells());
  for (int c = 0; c < sub.macro.num_cells(); ++c) {
    double out = 0.0;
    for (const CellFacetRef& ref : sub.cell_boundary[c]) out += ref.sign * sol.flux[ref.half_facet];
    res[c] = out - F[c];
  }
  return res;
}

DarcyErrors darcy_errors(const DarcySolution& sol, const SubMesh& sub, const VectorField& u, const ScalarField& p) {
  double eu = 0.0, nu = 0.0, ep = 0.0, np = 0.0;
  for (int s = 0; s < sub.num_subcells(); ++s)
    for_each_subcell_point(sub, s, 3, [&](const Vec3& x, double w) {
      const Vec3 ux = u(x);
      eu += w * (ux - sol.velocity[s]).squaredNorm();
      nu += w * ux.squaredNorm();
    });
  for (int c = 0; c < sub.macro.num_cells(); ++c) {
    Vec3 x = Vec3::Zero();
    double m = 0.0;
    for (int k = 0; k < sub.subcells_per_cell(); ++k) {
      const Subcell& sc = sub.subcells[sub.subcell_of(c, k)];
      x += sc.measure * sc.centroid;
      m += sc.measure;
    }
    x /= m;
    const double px = p(x);
    ep += m * (px - sol.pressure[c]) * (px - sol.pressure[c]);
    np += m * px * px;
  }
  DarcyErrors e;
  e.velocity = nu > 0.0 ? std::sqrt(eu / nu) : std::sqrt(eu);
  e.pressure = np > 0.0 ? std::sqrt(ep / np) : std::sqrt(ep);
  return e;
}

}  // namespace mscv
