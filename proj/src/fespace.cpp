#include "mscv/fespace.hpp"

#include <algorithm>
#include <cmath>

namespace mscv {

namespace {

double cross2(const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; }

Vec3 tangent_to_vertex(const SubMesh& sub, int e) {
  const HalfFacet& hf = sub.half_facets[e];
  return (hf.corners[0] - hf.corners[1]).normalized();
}

int other_half_edge(const Subcell& s, int e) { return s.half_facets[0] == e ? s.half_facets[1] : s.half_facets[0]; }

}  // namespace

DofLayout build_dof_layout(const SubMesh& sub, Method method) {
  DofLayout L;
  L.dim = sub.dim();
  L.method = method;
  L.num_half_facets = sub.num_half_facets();
  L.num_cells = sub.macro.num_cells();
  L.num_rotation_units = rotation_on_regions(method) ? sub.num_regions() : L.num_cells;
  L.rotation_comps = rotation_components(L.dim);
  return L;
}

Vec3 flux_dual_basis(const SubMesh& sub, int e, int s) {
  const int d = sub.dim();
  const Subcell& sc = sub.subcells[s];
  Eigen::Matrix3d N = Eigen::Matrix3d::Identity();
  int k = -1;
  for (int j = 0; j < d; ++j) {
    N.row(j).head(d) = sub.half_facets[sc.half_facets[j]].normal.head(d).transpose();
    if (sc.half_facets[j] == e) k = j;
  }
  if (k < 0) return Vec3::Zero();
  const auto Nd = N.topLeftCorner(d, d);
  const double det = Nd.determinant();
  if (std::abs(det) < 1e-14) throw Error("degenerate region at vertex " + std::to_string(sc.vertex));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  rhs[k] = 1.0 / sub.half_facets[e].measure;
  Vec3 out = Vec3::Zero();
  out.head(d) = Nd.partialPivLu().solve(rhs);
  return out;
}

StressBasis flux_dual_basis(const SubMesh& sub, int region) {
  const InteractionRegion& r = sub.regions[region];
  StressBasis B;
  B.vertex = r.vertex;
  B.half_facets = r.half_facets;
  for (int e : r.half_facets) {
    std::vector<BasisPiece> p;
    for (int s : sub.half_facets[e].subcells)
      if (s >= 0) p.push_back({s, flux_dual_basis(sub, e, s)});
    B.pieces.push_back(std::move(p));
  }
  return B;
}

Vec3 tangent_basis_normal(const SubMesh& sub, int e) {
  const Vec3 t = tangent_to_vertex(sub, e);
  return {t[1], -t[0], 0.0};
}

StressBasis stress_basis_2d(const SubMesh& sub, int region) {
  if (sub.dim() != 2) throw Error("stress_basis_2d: mesh is not 2D");
  const InteractionRegion& r = sub.regions[region];
  StressBasis B;
  B.vertex = r.vertex;
  B.half_facets = r.half_facets;
  for (int e : r.half_facets) {
    const Vec3 te = tangent_to_vertex(sub, e);
    std::vector<BasisPiece> p;
    for (int s : sub.half_facets[e].subcells) {
      if (s < 0) continue;
      const Vec3 to = tangent_to_vertex(sub, other_half_edge(sub.subcells[s], e));
      const double cr = cross2(to, te);
      if (std::abs(cr) < 1e-14) throw Error("degenerate region at vertex " + std::to_string(r.vertex));
      p.push_back({s, to / cr});
    }
    B.pieces.push_back(std::move(p));
  }
  return B;
}

StressBasis stress_basis_3d(const SubMesh& sub, int region) {
  if (sub.dim() != 3) throw Error("stress_basis_3d: mesh is not 3D");
  const InteractionRegion& r = sub.regions[region];
  StressBasis B;
  B.vertex = r.vertex;
  B.half_facets = r.half_facets;
  for (int e : r.half_facets) {
    const HalfFacet& hf = sub.half_facets[e];
    Vec3 v = hf.normal.cwiseAbs();
    std::vector<BasisPiece> p;
    for (int s : hf.subcells)
      if (s >= 0) p.push_back({s, v});
    B.pieces.push_back(std::move(p));
  }
  return B;
}

std::vector<int> cyclic_subcells(const SubMesh& sub, int region) {
  const InteractionRegion& r = sub.regions[region];
  const Vec3 x0 = sub.macro.vertices[r.vertex];
  std::vector<std::pair<double, int>> keyed;
  for (int s : r.subcells) {
    const Vec3 d = sub.subcells[s].centroid - x0;
    keyed.emplace_back(std::atan2(d[1], d[0]), s);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (auto& [a, s] : keyed) out.push_back(s);
  return out;
}

}  // namespace mscv
