#include "mscv/postprocess.hpp"

#include "mscv/quadrature.hpp"

#include <cmath>

namespace mscv {

std::vector<std::array<std::array<CellFacetRef, 2>, 4>> cell_edge_half_facets(const SubMesh& sub) {
  if (sub.dim() != 2) throw Error("cell edges are only defined in 2D");
  const MacroMesh& m = sub.macro;
  std::vector<std::array<std::array<CellFacetRef, 2>, 4>> out(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& cv = m.cells[c];
    std::array<int, 4> filled{};
    for (const CellFacetRef& ref : sub.cell_boundary[c]) {
      const auto& fv = m.facets[sub.half_facets[ref.half_facet].facet].vertices;
      for (int k = 0; k < 4; ++k) {
        const int a = cv[k], b = cv[(k + 1) % 4];
        if ((fv[0] == a && fv[1] == b) || (fv[0] == b && fv[1] == a)) {
          if (filled[k] >= 2) throw Error("cell edge with more than 2 half-facets");
          out[c][k][filled[k]++] = ref;
        }
      }
    }
  }
  return out;
}

Rt0Stress project_rt0(const McsvSolution& sol, const SubMesh& sub) {
  const auto edges = cell_edge_half_facets(sub);
  const DofLayout& L = sol.layout;
  Rt0Stress rt;
  rt.flux.resize(sub.macro.num_cells());
  for (int c = 0; c < sub.macro.num_cells(); ++c)
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (const CellFacetRef& ref : edges[c][k]) s += ref.sign * sol.stress[L.stress_dof(ref.half_facet, r)];
        rt.flux[c][r][k] = s;
      }
  return rt;
}

Vec3 Rt0Stress::eval(const MacroMesh& mesh, int cell, int row, const Vec3& xi) const {
  const auto& cv = mesh.cells[cell];
  const Vec3 &p0 = mesh.vertices[cv[0]], &p1 = mesh.vertices[cv[1]], &p2 = mesh.vertices[cv[2]],
             &p3 = mesh.vertices[cv[3]];
  const double s = xi[0], t = xi[1];
  const Vec3 dxs = (1 - t) * (p1 - p0) + t * (p2 - p3);
  const Vec3 dxt = (1 - s) * (p3 - p0) + s * (p2 - p1);
  const double J = dxs[0] * dxt[1] - dxs[1] * dxt[0];
  const auto& F = flux[cell][row];
  // reference fields with unit outward flux through edges 0..3
  const double vs = F[1] * s - F[3] * (1 - s);
  const double vt = F[2] * t - F[0] * (1 - t);
  return (vs * dxs + vt * dxt) / J;
}

Vec3 Rt0Stress::mean_divergence(const MacroMesh& mesh, int cell) const {
  Vec3 out = Vec3::Zero();
  const double area = mesh.cell_measure(cell);
  for (int r = 0; r < 2; ++r) {
    const auto& F = flux[cell][r];
    out[r] = (F[0] + F[1] + F[2] + F[3]) / area;
  }
  return out;
}

std::vector<Mat3> mean_stress(const McsvSolution& sol, const SubMesh& sub) {
  const int nc = sub.macro.num_cells();
  std::vector<Mat3> out(nc, Mat3::Zero());
  std::vector<double> area(nc, 0.0);
  for (int s = 0; s < sub.num_subcells(); ++s) {
    const Subcell& sc = sub.subcells[s];
    out[sc.cell] += sc.measure * sol.sigma[s];
    area[sc.cell] += sc.measure;
  }
  for (int c = 0; c < nc; ++c) out[c] /= area[c];
  return out;
}

std::vector<Vec3> cell_centroids(const SubMesh& sub) {
  const int nc = sub.macro.num_cells();
  std::vector<Vec3> out(nc, Vec3::Zero());
  std::vector<double> area(nc, 0.0);
  for (const Subcell& sc : sub.subcells) {
    out[sc.cell] += sc.measure * sc.centroid;
    area[sc.cell] += sc.measure;
  }
  for (int c = 0; c < nc; ++c) out[c] /= area[c];
  return out;
}

std::vector<Vec3> conservation_residual(const McsvSolution& sol, const SubMesh& sub, const Eigen::VectorXd& F) {
  const DofLayout& L = sol.layout;
  const int d = sub.dim();
  std::vector<Vec3> out(sub.macro.num_cells(), Vec3::Zero());
  for (int c = 0; c < sub.macro.num_cells(); ++c) {
    for (const CellFacetRef& ref : sub.cell_boundary[c])
      for (int r = 0; r < d; ++r) out[c][r] += ref.sign * sol.stress[L.stress_dof(ref.half_facet, r)];
    for (int r = 0; r < d; ++r) out[c][r] += F.size() ? F[L.disp_dof(c, r)] : 0.0;
  }
  return out;
}

namespace {

struct Ratio {
  double err = 0.0;
  double ref = 0.0;
  double value(bool& absolute) const {
    absolute = !(ref > 0.0);
    return absolute ? std::sqrt(err) : std::sqrt(err / ref);
  }
};

}  // namespace

ErrorRecord error_norms(const McsvSolution& sol, const ExactFields& exact, const SubMesh& sub,
                        const ErrorOptions& opts) {
  const int d = sub.dim();
  const DofLayout& L = sol.layout;
  const auto tensor_part = [d](const Mat3& A) { return A.topLeftCorner(d, d).squaredNorm(); };
  Ratio es, em, eu, eg, e0;

  const bool per_region = rotation_on_regions(L.method);
  for (int s = 0; s < sub.num_subcells(); ++s) {
    const Subcell& sc = sub.subcells[s];
    const Vec3 uh = sol.displacement(sc.cell);
    const Vec3 gh = sol.rotation(per_region ? sc.vertex : sc.cell);
    for_each_subcell_point(sub, s, opts.points, [&](const Vec3& x, double w) {
      const Mat3 sig = exact.sigma(x);
      es.err += w * tensor_part(sig - sol.sigma[s]);
      es.ref += w * tensor_part(sig);
      const Vec3 u = exact.u(x);
      eu.err += w * (u - uh).squaredNorm();
      eu.ref += w * u.squaredNorm();
      if (opts.gamma == GammaNorm::Integral) {
        const Vec3 g = exact.gamma(x);
        eg.err += w * (g - gh).squaredNorm();
        eg.ref += w * g.squaredNorm();
      }
    });
  }

  const std::vector<Vec3> cm = cell_centroids(sub);
  const std::vector<Mat3> ms = mean_stress(sol, sub);
  for (int c = 0; c < sub.macro.num_cells(); ++c) {
    const double a = sub.macro.cell_measure(c);
    const Mat3 sig = exact.sigma(cm[c]);
    em.err += a * tensor_part(sig - ms[c]);
    em.ref += a * tensor_part(sig);
    const Vec3 u = exact.u(cm[c]);
    e0.err += a * (u - sol.displacement(c)).squaredNorm();
    e0.ref += a * u.squaredNorm();
  }

  if (opts.gamma == GammaNorm::Sample) {
    if (per_region) {
      std::vector<double> area(sub.num_regions(), 0.0);
      for (const Subcell& sc : sub.subcells) area[sc.vertex] += sc.measure;
      for (int v = 0; v < sub.num_regions(); ++v) {
        const Vec3 g = exact.gamma(sub.macro.vertices[v]);
        eg.err += area[v] * (g - sol.rotation(v)).squaredNorm();
        eg.ref += area[v] * g.squaredNorm();
      }
    } else {
      for (int c = 0; c < sub.macro.num_cells(); ++c) {
        const double a = sub.macro.cell_measure(c);
        const Vec3 g = exact.gamma(cm[c]);
        eg.err += a * (g - sol.rotation(c)).squaredNorm();
        eg.ref += a * g.squaredNorm();
      }
    }
  }

  ErrorRecord rec;
  rec.sigma = es.value(rec.absolute[0]);
  rec.mean_sigma = em.value(rec.absolute[1]);
  rec.u = eu.value(rec.absolute[2]);
  rec.gamma = eg.value(rec.absolute[3]);
  rec.u_0h = e0.value(rec.absolute[4]);
  return rec;
}

}  // namespace mscv
