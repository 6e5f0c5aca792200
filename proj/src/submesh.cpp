#include "mscv/submesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mscv {

namespace {

constexpr std::array<std::array<int, 4>, 6> kHexFaces{{
    {0, 3, 7, 4}, {1, 2, 6, 5}, {0, 1, 5, 4}, {3, 2, 6, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}}};

// VTK hexahedron vertex index for corner bits (x, y, z).
constexpr std::array<int, 8> kVtkOfBits{0, 1, 3, 2, 4, 5, 7, 6};

double cross2(const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; }

double quad_area(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return 0.5 * (cross2(a, b) + cross2(b, c) + cross2(c, d) + cross2(d, a));
}

Vec3 quad_centroid(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  // Split along a-c into two triangles.
  const double a1 = 0.5 * cross2(b - a, c - a);
  const double a2 = 0.5 * cross2(c - a, d - a);
  return (a1 * (a + b + c) / 3.0 + a2 * (a + c + d) / 3.0) / (a1 + a2);
}

int local_index(const std::array<int, 8>& cv, int n, int v) {
  for (int k = 0; k < n; ++k)
    if (cv[k] == v) return k;
  return -1;
}

void subdivide_2d(SubMesh& sub) {
  const MacroMesh& m = sub.macro;
  const auto& X = m.vertices;
  const int nc = m.num_cells();

  sub.half_facets.resize(2 * m.num_facets());
  for (int f = 0; f < m.num_facets(); ++f) {
    const PrimalFacet& pf = m.facets[f];
    const Vec3 a = X[pf.vertices[0]], b = X[pf.vertices[1]];
    const Vec3 mid = 0.5 * (a + b);
    const Vec3 d = b - a;
    // The facet is stored in the counter-clockwise order of cells[0].
    const Vec3 n = Vec3(d[1], -d[0], 0.0).normalized();
    for (int s = 0; s < 2; ++s) {
      HalfFacet& hf = sub.half_facets[2 * f + s];
      hf.facet = f;
      hf.vertex = pf.vertices[s];
      hf.corners[0] = X[hf.vertex];
      hf.corners[1] = mid;
      hf.measure = (mid - X[hf.vertex]).norm();
      hf.centroid = 0.5 * (mid + X[hf.vertex]);
      hf.normal = n;
      hf.cells = pf.cells;
      hf.boundary = pf.boundary;
    }
  }

  std::map<std::pair<int, int>, int> edge_of;
  for (int f = 0; f < m.num_facets(); ++f) {
    const auto& fv = m.facets[f].vertices;
    edge_of[{std::min(fv[0], fv[1]), std::max(fv[0], fv[1])}] = f;
  }
  auto half_facet_at = [&](int a, int b, int at) {
    const int f = edge_of.at({std::min(a, b), std::max(a, b)});
    return 2 * f + (m.facets[f].vertices[0] == at ? 0 : 1);
  };

  sub.subcells.resize(4 * nc);
  sub.dual_facets.resize(4 * nc);
  sub.cell_boundary.assign(nc, {});
  for (int c = 0; c < nc; ++c) {
    const auto& cv = m.cells[c];
    const Vec3 center = m.cell_center(c);
    std::array<Vec3, 4> mid;
    for (int k = 0; k < 4; ++k) mid[k] = 0.5 * (X[cv[k]] + X[cv[(k + 1) % 4]]);
    for (int k = 0; k < 4; ++k) {
      Subcell& s = sub.subcells[sub.subcell_of(c, k)];
      s.cell = c;
      s.vertex = cv[k];
      s.local_corner = k;
      const Vec3 &p0 = X[cv[k]], &p1 = mid[k], &p3 = mid[(k + 3) % 4];
      s.corners[0] = p0;
      s.corners[1] = p1;
      s.corners[2] = p3;
      s.corners[3] = center;
      s.measure = quad_area(p0, p1, center, p3);
      for (int t = 0; t < 4; ++t) {
        const Vec3& o = s.corners[t];
        const Vec3& ex = s.corners[t ^ 1];
        const Vec3& ey = s.corners[t ^ 2];
        const double sx = (t & 1) ? -1.0 : 1.0, sy = (t & 2) ? -1.0 : 1.0;
        if (!(sx * sy * cross2(ex - o, ey - o) > 0.0))
          throw Error("degenerate subcell in cell " + std::to_string(c));
      }
      s.centroid = quad_centroid(p0, p1, center, p3);
      s.half_facets = {half_facet_at(cv[k], cv[(k + 1) % 4], cv[k]), half_facet_at(cv[(k + 3) % 4], cv[k], cv[k]),
                       -1};
    }
    for (int k = 0; k < 4; ++k) {
      DualFacet& df = sub.dual_facets[4 * c + k];
      df.cell = c;
      df.corners[0] = mid[k];
      df.corners[1] = center;
      df.measure = (center - mid[k]).norm();
      df.centroid = 0.5 * (center + mid[k]);
      const Vec3 t = center - mid[k];
      Vec3 n = Vec3(t[1], -t[0], 0.0).normalized();
      if (n.dot(X[cv[(k + 1) % 4]] - X[cv[k]]) < 0.0) n = -n;
      df.normal = n;
      df.subcells = {sub.subcell_of(c, k), sub.subcell_of(c, (k + 1) % 4)};
    }
  }
}

void subdivide_3d(SubMesh& sub) {
  const MacroMesh& m = sub.macro;
  const auto& X = m.vertices;
  const int nc = m.num_cells();
  constexpr double kTol = 1e-12;

  std::map<std::array<int, 4>, int> face_of;
  for (int f = 0; f < m.num_facets(); ++f) {
    auto key = m.facets[f].vertices;
    std::sort(key.begin(), key.end());
    face_of[key] = f;
  }

  std::vector<Vec3> lo(nc), hi(nc);
  std::vector<std::array<int, 6>> cell_faces(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& cv = m.cells[c];
    lo[c] = X[cv[0]];
    hi[c] = X[cv[6]];
    const Vec3 ext = hi[c] - lo[c];
    for (int bits = 0; bits < 8; ++bits) {
      Vec3 expect;
      for (int a = 0; a < 3; ++a) expect[a] = (bits >> a) & 1 ? hi[c][a] : lo[c][a];
      if ((X[cv[kVtkOfBits[bits]]] - expect).norm() > kTol * ext.norm())
        throw Error("subdivide: 3D cell " + std::to_string(c) + " is not an axis-aligned cuboid");
    }
    for (int lf = 0; lf < 6; ++lf) {
      std::array<int, 4> key{cv[kHexFaces[lf][0]], cv[kHexFaces[lf][1]], cv[kHexFaces[lf][2]], cv[kHexFaces[lf][3]]};
      std::sort(key.begin(), key.end());
      cell_faces[c][lf] = face_of.at(key);
    }
  }

  sub.half_facets.resize(4 * m.num_facets());
  for (int f = 0; f < m.num_facets(); ++f) {
    const PrimalFacet& pf = m.facets[f];
    Vec3 flo = X[pf.vertices[0]], fhi = flo;
    for (int k = 1; k < 4; ++k) {
      flo = flo.cwiseMin(X[pf.vertices[k]]);
      fhi = fhi.cwiseMax(X[pf.vertices[k]]);
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
      if (fhi[a] - flo[a] < fhi[axis] - flo[axis]) axis = a;
    const Vec3 fc = 0.5 * (flo + fhi);
    const int c0 = pf.cells[0];
    Vec3 n = Vec3::Zero();
    n[axis] = fc[axis] > 0.5 * (lo[c0][axis] + hi[c0][axis]) ? 1.0 : -1.0;
    const int b = (axis + 1) % 3, cax = (axis + 2) % 3;
    for (int s = 0; s < 4; ++s) {
      HalfFacet& hf = sub.half_facets[4 * f + s];
      hf.facet = f;
      hf.vertex = pf.vertices[s];
      const Vec3& p = X[hf.vertex];
      Vec3 qlo = p.cwiseMin(fc), qhi = p.cwiseMax(fc);
      qlo[axis] = qhi[axis] = fc[axis];
      for (int t = 0; t < 4; ++t) {
        Vec3 q = qlo;
        if (t & 1) q[b] = qhi[b];
        if (t & 2) q[cax] = qhi[cax];
        hf.corners[t] = q;
      }
      hf.measure = (qhi[b] - qlo[b]) * (qhi[cax] - qlo[cax]);
      hf.centroid = 0.5 * (qlo + qhi);
      hf.normal = n;
      hf.cells = pf.cells;
      hf.boundary = pf.boundary;
    }
  }

  sub.subcells.resize(8 * nc);
  sub.dual_facets.resize(12 * nc);
  sub.cell_boundary.assign(nc, {});
  for (int c = 0; c < nc; ++c) {
    const auto& cv = m.cells[c];
    const Vec3 center = 0.5 * (lo[c] + hi[c]);
    for (int bits = 0; bits < 8; ++bits) {
      const int k = kVtkOfBits[bits];
      Subcell& s = sub.subcells[sub.subcell_of(c, k)];
      s.cell = c;
      s.vertex = cv[k];
      s.local_corner = k;
      Vec3 slo, shi;
      for (int a = 0; a < 3; ++a) {
        const bool far = (bits >> a) & 1;
        slo[a] = far ? center[a] : lo[c][a];
        shi[a] = far ? hi[c][a] : center[a];
      }
      for (int t = 0; t < 8; ++t)
        for (int a = 0; a < 3; ++a) s.corners[t][a] = (t >> a) & 1 ? shi[a] : slo[a];
      s.measure = (shi - slo).prod();
      s.centroid = 0.5 * (slo + shi);
      for (int a = 0; a < 3; ++a) {
        const int f = cell_faces[c][2 * a + ((bits >> a) & 1)];
        const auto& fv = m.facets[f].vertices;
        const int slot = static_cast<int>(std::find(fv.begin(), fv.begin() + 4, s.vertex) - fv.begin());
        s.half_facets[a] = 4 * f + slot;
      }
    }
    int d = 0;
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, cax = (a + 2) % 3;
      for (int rest = 0; rest < 4; ++rest) {
        const int bb = rest & 1, bc = (rest >> 1) & 1;
        const int bits0 = (bb << b) | (bc << cax);
        const int bits1 = bits0 | (1 << a);
        DualFacet& df = sub.dual_facets[12 * c + d++];
        df.cell = c;
        Vec3 qlo, qhi;
        qlo[a] = qhi[a] = center[a];
        qlo[b] = bb ? center[b] : lo[c][b];
        qhi[b] = bb ? hi[c][b] : center[b];
        qlo[cax] = bc ? center[cax] : lo[c][cax];
        qhi[cax] = bc ? hi[c][cax] : center[cax];
        for (int t = 0; t < 4; ++t) {
          Vec3 q = qlo;
          if (t & 1) q[b] = qhi[b];
          if (t & 2) q[cax] = qhi[cax];
          df.corners[t] = q;
        }
        df.measure = (qhi[b] - qlo[b]) * (qhi[cax] - qlo[cax]);
        df.centroid = 0.5 * (qlo + qhi);
        df.normal = Vec3::Zero();
        df.normal[a] = 1.0;
        df.subcells = {sub.subcell_of(c, kVtkOfBits[bits0]), sub.subcell_of(c, kVtkOfBits[bits1])};
      }
    }
  }
}

}  // namespace

SubMesh subdivide(const MacroMesh& mesh) {
  SubMesh sub;
  sub.macro = mesh;
  if (mesh.dim == 2)
    subdivide_2d(sub);
  else
    subdivide_3d(sub);

  const int nvc = mesh.vertices_per_cell();
  for (int e = 0; e < sub.num_half_facets(); ++e) {
    HalfFacet& hf = sub.half_facets[e];
    for (int side = 0; side < 2; ++side) {
      const int c = hf.cells[side];
      if (c < 0) continue;
      const int k = local_index(mesh.cells[c], nvc, hf.vertex);
      hf.subcells[side] = sub.subcell_of(c, k);
      sub.cell_boundary[c].push_back({e, side == 0 ? 1.0 : -1.0});
    }
  }

  sub.regions.assign(mesh.num_vertices(), {});
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    sub.regions[v].vertex = v;
    sub.regions[v].boundary = mesh.boundary_vertex[v];
  }
  for (int s = 0; s < sub.num_subcells(); ++s) {
    auto& r = sub.regions[sub.subcells[s].vertex];
    r.subcells.push_back(s);
    r.cells.push_back(sub.subcells[s].cell);
  }
  for (int e = 0; e < sub.num_half_facets(); ++e) sub.regions[sub.half_facets[e].vertex].half_facets.push_back(e);
  return sub;
}

Vec3 subcell_map(const SubMesh& sub, int s, const Vec3& xi, double* jacobian) {
  const int d = sub.dim();
  const auto& P = sub.subcells[s].corners;
  Vec3 x = Vec3::Zero();
  Mat3 J = Mat3::Identity();
  if (d == 2) J(2, 2) = 1.0;
  J.topLeftCorner(d, d).setZero();
  const int nt = 1 << d;
  for (int t = 0; t < nt; ++t) {
    double w = 1.0;
    Vec3 dw = Vec3::Ones();
    for (int a = 0; a < d; ++a) {
      const bool far = (t >> a) & 1;
      const double fa = far ? xi[a] : 1.0 - xi[a];
      w *= fa;
      for (int b = 0; b < d; ++b) {
        if (b == a)
          dw[b] *= far ? 1.0 : -1.0;
        else
          dw[b] *= fa;
      }
    }
    x += w * P[t];
    for (int b = 0; b < d; ++b) J.col(b).head(d) += dw[b] * P[t].head(d);
  }
  if (jacobian) *jacobian = std::abs(J.topLeftCorner(d, d).determinant());
  return x;
}

}  // namespace mscv
