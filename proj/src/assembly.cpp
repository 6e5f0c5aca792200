#include "mscv/assembly.hpp"

#include "mscv/parallel.hpp"
#include "mscv/quadrature.hpp"

#include <algorithm>

namespace mscv {

namespace {

int local_index(const std::vector<int>& v, int x) {
  const auto it = std::find(v.begin(), v.end(), x);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

// Row r of the identity outer b.
Mat3 row_tensor(int r, const Vec3& b) {
  Mat3 w = Mat3::Zero();
  w.row(r) = b.transpose();
  return w;
}

double ddot(const Mat3& a, const Mat3& b) { return (a.array() * b.array()).sum(); }

}  // namespace

Mat3 skew_basis(int dim, int k) {
  Mat3 S = Mat3::Zero();
  if (dim == 2) {
    S(0, 1) = -1.0;
    S(1, 0) = 1.0;
    return S;
  }
  const int a = (k + 1) % 3, b = (k + 2) % 3;
  S(a, b) = -1.0;
  S(b, a) = 1.0;
  return S;
}

VertexBlockSystem assemble_blocks(const SubMesh& sub, const MaterialField& mat, const DofLayout& layout,
                                  Variant variant, Exec exec) {
  check_material(mat, sub.macro);
  const int d = sub.dim();
  const int rc = layout.rotation_comps;
  VertexBlockSystem sys;
  sys.layout = layout;
  sys.variant = variant;
  sys.blocks.resize(sub.num_regions());

  for_range(sub.num_regions(), exec, [&](int ri) {
    const InteractionRegion& reg = sub.regions[ri];
    RegionBlock& blk = sys.blocks[ri];
    blk.region = ri;
    const int nh = static_cast<int>(reg.half_facets.size());
    const int m = d * nh;
    const int nc = static_cast<int>(reg.cells.size());
    for (int e : reg.half_facets)
      for (int r = 0; r < d; ++r) blk.stress_dofs.push_back(layout.stress_dof(e, r));
    for (int c : reg.cells)
      for (int r = 0; r < d; ++r) blk.disp_dofs.push_back(layout.disp_dof(c, r));
    const std::vector<int> units = rotation_on_regions(layout.method) ? std::vector<int>{reg.vertex} : reg.cells;
    for (int u : units)
      for (int k = 0; k < rc; ++k) blk.rot_dofs.push_back(layout.rot_dof(u, k));

    blk.A_ss = Eigen::MatrixXd::Zero(m, m);
    blk.A_su = Eigen::MatrixXd::Zero(d * nc, m);
    blk.A_sg = Eigen::MatrixXd::Zero(static_cast<int>(blk.rot_dofs.size()), m);

    for (int s : reg.subcells) {
      const Subcell& sc = sub.subcells[s];
      const Lame lm = mat.at(sc.cell);
      const double coef = lm.lambda / (d * lm.lambda + 2.0 * lm.mu);
      const double w2mu = sc.measure / (2.0 * lm.mu);
      int loc[3];
      Vec3 b[3];
      for (int k = 0; k < d; ++k) {
        loc[k] = local_index(reg.half_facets, sc.half_facets[k]);
        if (loc[k] < 0) throw Error("region " + std::to_string(ri) + " misses a half-facet of subcell " + std::to_string(s));
        b[k] = flux_dual_basis(sub, sc.half_facets[k], s);
      }
      // (A w_j, w_i) with w = e_r (x) b: delta_rq b_i.b_j - coef b_j[q] b_i[r]
      for (int ki = 0; ki < d; ++ki)
        for (int r = 0; r < d; ++r)
          for (int kj = 0; kj < d; ++kj)
            for (int q = 0; q < d; ++q) {
              double v = -coef * b[kj][q] * b[ki][r];
              if (r == q) v += b[ki].head(d).dot(b[kj].head(d));
              blk.A_ss(loc[ki] * d + r, loc[kj] * d + q) += w2mu * v;
            }
      const int unit = rotation_on_regions(layout.method) ? 0 : local_index(units, sc.cell);
      const double scale = variant == Variant::Scaled ? sc.measure / (2.0 * lm.mu) : sc.measure;
      for (int k = 0; k < rc; ++k) {
        const Mat3 S = skew_basis(d, k);
        for (int kj = 0; kj < d; ++kj)
          for (int r = 0; r < d; ++r)
            blk.A_sg(unit * rc + k, loc[kj] * d + r) += scale * S.row(r).head(d).dot(b[kj].head(d));
      }
    }
    // (u, div w): unit flux out of cells[0] and into cells[1].
    for (int j = 0; j < nh; ++j) {
      const HalfFacet& hf = sub.half_facets[reg.half_facets[j]];
      for (int side = 0; side < 2; ++side) {
        if (hf.cells[side] < 0) continue;
        const int lc = local_index(reg.cells, hf.cells[side]);
        for (int r = 0; r < d; ++r) blk.A_su(lc * d + r, j * d + r) += side == 0 ? 1.0 : -1.0;
      }
    }
  });
  sys.F = Eigen::VectorXd::Zero(layout.num_disp());
  sys.G = Eigen::VectorXd::Zero(layout.num_stress());
  return sys;
}

LoadVectors assemble_rhs(const SubMesh& sub, const DofLayout& layout, const VectorField& f, const VectorField& g,
                         RhsOptions opts) {
  const int d = sub.dim();
  LoadVectors out;
  out.F = Eigen::VectorXd::Zero(layout.num_disp());
  out.G = Eigen::VectorXd::Zero(layout.num_stress());
  if (f && opts.body_points == 0) {
    for (int c = 0; c < sub.macro.num_cells(); ++c) {
      const Vec3 v = f(sub.macro.cell_center(c)) * sub.macro.cell_measure(c);
      for (int r = 0; r < d; ++r) out.F[layout.disp_dof(c, r)] = v[r];
    }
  } else if (f) {
    for (int s = 0; s < sub.num_subcells(); ++s) {
      const int c = sub.subcells[s].cell;
      for_each_subcell_point(sub, s, opts.body_points, [&](const Vec3& x, double w) {
        const Vec3 v = f(x);
        for (int r = 0; r < d; ++r) out.F[layout.disp_dof(c, r)] += w * v[r];
      });
    }
  }
  if (g) {
    for (int e = 0; e < sub.num_half_facets(); ++e) {
      const HalfFacet& hf = sub.half_facets[e];
      if (!hf.boundary) continue;
      Vec3 acc = Vec3::Zero();
      if (opts.boundary == BoundaryRule::FacetCenter) {
        const PrimalFacet& pf = sub.macro.facets[hf.facet];
        const int nv = d == 2 ? 2 : 4;
        Vec3 x = Vec3::Zero();
        for (int k = 0; k < nv; ++k) x += sub.macro.vertices[pf.vertices[k]];
        acc = g(x / nv);
      } else {
        for_each_half_facet_point(sub, e, opts.boundary_points, [&](const Vec3& x, double w) { acc += w * g(x); });
        acc /= hf.measure;
      }
      for (int r = 0; r < d; ++r) out.G[layout.stress_dof(e, r)] = acc[r];
    }
  }
  return out;
}

SaddleSystem assemble_full_saddle(const SubMesh& sub, const MaterialField& mat, const DofLayout& layout,
                                  const LoadVectors& rhs, Variant variant) {
  check_material(mat, sub.macro);
  const int d = sub.dim();
  const int rc = layout.rotation_comps;
  SaddleSystem S;
  S.num_stress = layout.num_stress();
  S.num_disp = layout.num_disp();
  S.num_rot = layout.num_rot();
  const int u0 = S.num_stress, g0 = S.num_stress + S.num_disp, n = g0 + S.num_rot;
  std::vector<Eigen::Triplet<double>> T;
  auto sym = [&](int i, int j, double v) {
    if (v == 0.0) return;
    T.emplace_back(i, j, v);
    T.emplace_back(j, i, v);
  };

  for (int s = 0; s < sub.num_subcells(); ++s) {
    const Subcell& sc = sub.subcells[s];
    const Lame lm = mat.at(sc.cell);
    std::vector<std::pair<int, Mat3>> w;
    for (int k = 0; k < d; ++k)
      for (int r = 0; r < d; ++r)
        w.emplace_back(layout.stress_dof(sc.half_facets[k], r), row_tensor(r, flux_dual_basis(sub, sc.half_facets[k], s)));
    const int unit = layout.rotation_unit(sc);
    for_each_subcell_point(sub, s, 2, [&](const Vec3&, double wt) {
      for (auto& [i, wi] : w) {
        for (auto& [j, wj] : w) T.emplace_back(i, j, wt * ddot(compliance(wj, lm, d), wi));
        for (int k = 0; k < rc; ++k) {
          const Mat3 xi = skew_basis(d, k);
          const double v = variant == Variant::Scaled ? ddot(compliance(wi, lm, d), xi) : ddot(wi, xi);
          sym(i, g0 + layout.rot_dof(unit, k), wt * v);
        }
      }
    });
  }
  // (u, div w) = -sum over dual facets of u_M . [[w n]]
  for (const DualFacet& df : sub.dual_facets) {
    const int c = df.cell;
    for (int side = 0; side < 2; ++side) {
      const int s = df.subcells[side];
      const Subcell& sc = sub.subcells[s];
      const double sgn = side == 0 ? 1.0 : -1.0;
      for (int k = 0; k < d; ++k) {
        const int e = sc.half_facets[k];
        const double jn = sgn * flux_dual_basis(sub, e, s).dot(df.normal) * df.measure;
        for (int r = 0; r < d; ++r) sym(layout.stress_dof(e, r), u0 + layout.disp_dof(c, r), -jn);
      }
    }
  }
  S.K.resize(n, n);
  S.K.setFromTriplets(T.begin(), T.end());
  S.K.prune(0.0);
  S.rhs = Eigen::VectorXd::Zero(n);
  S.rhs.head(S.num_stress) = rhs.G;
  S.rhs.segment(u0, S.num_disp) = -rhs.F;
  return S;
}

}  // namespace mscv

namespace mscv {

Vec3 McsvSolution::displacement(int cell) const {
  Vec3 v = Vec3::Zero();
  for (int r = 0; r < layout.dim; ++r) v[r] = disp[layout.disp_dof(cell, r)];
  return v;
}

Vec3 McsvSolution::rotation(int unit) const {
  Vec3 v = Vec3::Zero();
  for (int k = 0; k < layout.rotation_comps; ++k) v[k] = rot[layout.rot_dof(unit, k)];
  return v;
}

std::vector<Mat3> stress_on_subcells(const SubMesh& sub, const DofLayout& layout, const Eigen::VectorXd& coeffs) {
  const int d = sub.dim();
  std::vector<Mat3> out(sub.num_subcells(), Mat3::Zero());
  for (int s = 0; s < sub.num_subcells(); ++s) {
    const Subcell& sc = sub.subcells[s];
    for (int k = 0; k < d; ++k) {
      const Vec3 b = flux_dual_basis(sub, sc.half_facets[k], s);
      for (int r = 0; r < d; ++r) out[s].row(r) += coeffs[layout.stress_dof(sc.half_facets[k], r)] * b.transpose();
    }
  }
  return out;
}

}  // namespace mscv
