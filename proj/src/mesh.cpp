#include "mscv/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace mscv {

namespace {

// Faces of a VTK-ordered hexahedron: x-, x+, y-, y+, z-, z+.
constexpr std::array<std::array<int, 4>, 6> kHexFaces{{
    {0, 3, 7, 4}, {1, 2, 6, 5}, {0, 1, 5, 4}, {3, 2, 6, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}}};

double cross2(const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

Vec3 MacroMesh::cell_center(int c) const {
  Vec3 s = Vec3::Zero();
  const int nv = vertices_per_cell();
  for (int k = 0; k < nv; ++k) s += vertices[cells[c][k]];
  return s / nv;
}

double MacroMesh::cell_measure(int c) const {
  const auto& cv = cells[c];
  if (dim == 2) {
    double a = 0.0;
    for (int k = 0; k < 4; ++k) a += cross2(vertices[cv[k]], vertices[cv[(k + 1) % 4]]);
    return 0.5 * a;
  }
  const Vec3 d = vertices[cv[6]] - vertices[cv[0]];
  return d[0] * d[1] * d[2];
}

double MacroMesh::max_diameter() const {
  double hmax = 0.0;
  const int nv = vertices_per_cell();
  for (const auto& cv : cells)
    for (int a = 0; a < nv; ++a)
      for (int b = a + 1; b < nv; ++b)
        hmax = std::max(hmax, (vertices[cv[a]] - vertices[cv[b]]).norm());
  return hmax;
}

double MacroMesh::total_measure() const {
  double s = 0.0;
  for (int c = 0; c < num_cells(); ++c) s += cell_measure(c);
  return s;
}

double min_corner_jacobian(const MacroMesh& mesh, int c) {
  const auto& cv = mesh.cells[c];
  const auto& X = mesh.vertices;
  if (mesh.dim == 2) {
    double jmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
      const Vec3& p = X[cv[k]];
      jmin = std::min(jmin, cross2(X[cv[(k + 1) % 4]] - p, X[cv[(k + 3) % 4]] - p));
    }
    return jmin;
  }
  Mat3 J;
  J.col(0) = X[cv[1]] - X[cv[0]];
  J.col(1) = X[cv[3]] - X[cv[0]];
  J.col(2) = X[cv[4]] - X[cv[0]];
  return J.determinant();
}

double max_parallelogram_defect(const MacroMesh& mesh) {
  double d = 0.0;
  for (const auto& cv : mesh.cells) {
    const Vec3 r34 = mesh.vertices[cv[2]] - mesh.vertices[cv[3]];
    const Vec3 r21 = mesh.vertices[cv[1]] - mesh.vertices[cv[0]];
    d = std::max(d, (r34 - r21).norm());
  }
  return d;
}

void finalize_topology(MacroMesh& mesh) {
  mesh.facets.clear();
  if (mesh.dim != 2 && mesh.dim != 3) throw Error("mesh dimension must be 2 or 3");
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (!(min_corner_jacobian(mesh, c) > 0.0))
      throw Error("degenerate cell " + std::to_string(c) + ": non-positive corner Jacobian");
  }

  std::map<std::array<int, 4>, int> index;
  auto add = [&](std::array<int, 4> verts, int c) {
    std::array<int, 4> key = verts;
    std::sort(key.begin(), key.end());
    auto [it, inserted] = index.emplace(key, mesh.num_facets());
    if (inserted) {
      PrimalFacet f;
      f.vertices = verts;
      f.cells[0] = c;
      mesh.facets.push_back(f);
    } else {
      PrimalFacet& f = mesh.facets[it->second];
      if (f.cells[1] != -1) throw Error("non-manifold facet shared by more than two cells");
      f.cells[1] = c;
    }
  };

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    if (mesh.dim == 2) {
      for (int k = 0; k < 4; ++k) add({cv[k], cv[(k + 1) % 4], -1, -1}, c);
    } else {
      for (const auto& lf : kHexFaces) add({cv[lf[0]], cv[lf[1]], cv[lf[2]], cv[lf[3]]}, c);
    }
  }

  mesh.boundary_vertex.assign(mesh.vertices.size(), false);
  const int nfv = mesh.dim == 2 ? 2 : 4;
  for (auto& f : mesh.facets) {
    f.boundary = f.cells[1] == -1;
    if (f.boundary)
      for (int k = 0; k < nfv; ++k) mesh.boundary_vertex[f.vertices[k]] = true;
  }
}

MacroMesh build_structured(int n, const Box& domain, int dim) {
  if (n < 1) throw Error("build_structured: n must be at least 1");
  if (dim != 2 && dim != 3) throw Error("build_structured: dim must be 2 or 3");
  const Vec3 ext = domain.hi - domain.lo;
  for (int a = 0; a < dim; ++a)
    if (!(ext[a] > 0.0)) throw Error("build_structured: degenerate box");

  MacroMesh mesh;
  mesh.dim = dim;
  mesh.h = ext[0] / n;
  const int m = n + 1;
  auto coord = [&](int a, int i) { return domain.lo[a] + ext[a] * static_cast<double>(i) / n; };

  if (dim == 2) {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) mesh.vertices.emplace_back(coord(0, i), coord(1, j), 0.0);
    auto vid = [m](int i, int j) { return j * m + i; };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1), -1, -1, -1, -1});
  } else {
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) mesh.vertices.emplace_back(coord(0, i), coord(1, j), coord(2, k));
    auto vid = [m](int i, int j, int k) { return (k * m + j) * m + i; };
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          mesh.cells.push_back({vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k),
                                vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j + 1, k + 1),
                                vid(i, j + 1, k + 1)});
  }
  finalize_topology(mesh);
  return mesh;
}

Vec3 map_point(MeshMap map, const Vec3& p) {
  using std::numbers::pi;
  const double x = p[0], y = p[1];
  switch (map) {
    case MeshMap::ParallelogramSeed: {
      const double w = std::cos(3 * pi * x) * std::cos(3 * pi * y);
      return {x + 0.03 * w, y - 0.04 * w, p[2]};
    }
    case MeshMap::Smooth: {
      const double w = std::sin(2 * pi * x) * std::sin(2 * pi * y);
      return {x + 0.1 * w, y + 0.1 * w, p[2]};
    }
  }
  return p;
}

MacroMesh apply_map(const MacroMesh& mesh, MeshMap map) {
  if (mesh.dim != 2) throw Error("apply_map: only 2D meshes are supported");
  MacroMesh out = mesh;
  for (auto& v : out.vertices) v = map_point(map, v);
  finalize_topology(out);
  return out;
}

MacroMesh refine_uniform(const MacroMesh& mesh) {
  if (mesh.dim != 2) throw Error("refine_uniform: only 2D meshes are supported");
  MacroMesh out;
  out.dim = 2;
  out.h = 0.5 * mesh.h;
  out.vertices = mesh.vertices;
  std::vector<int> mid(mesh.facets.size());
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    const auto& fv = mesh.facets[f].vertices;
    mid[f] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[fv[0]] + mesh.vertices[fv[1]]));
  }
  // Cell edge k is the facet joining local vertices k and k+1.
  std::map<std::pair<int, int>, int> edge_of;
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    const auto& fv = mesh.facets[f].vertices;
    edge_of[{std::min(fv[0], fv[1]), std::max(fv[0], fv[1])}] = static_cast<int>(f);
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    const int center = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.cell_center(c));
    std::array<int, 4> m{};
    for (int k = 0; k < 4; ++k) {
      const int a = cv[k], b = cv[(k + 1) % 4];
      m[k] = mid[edge_of.at({std::min(a, b), std::max(a, b)})];
    }
    for (int k = 0; k < 4; ++k)
      out.cells.push_back({cv[k], m[k], center, m[(k + 3) % 4], -1, -1, -1, -1});
  }
  finalize_topology(out);
  return out;
}

MacroMesh perturb_random(const MacroMesh& mesh, std::uint64_t seed) {
  if (mesh.dim != 2) throw Error("perturb_random: only 2D meshes are supported");
  const double radius = mesh.h * mesh.h;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto draw = [&]() -> Vec3 {
    const double r = radius * std::sqrt(unif(gen));
    const double t = 2.0 * std::numbers::pi * unif(gen);
    return {r * std::cos(t), r * std::sin(t), 0.0};
  };

  MacroMesh out = mesh;
  for (int v = 0; v < out.num_vertices(); ++v)
    if (!mesh.boundary_vertex[v]) out.vertices[v] = mesh.vertices[v] + draw();

  constexpr int kMaxRetries = 100;
  for (int attempt = 0;; ++attempt) {
    std::vector<int> bad;
    for (int c = 0; c < out.num_cells(); ++c)
      if (!(min_corner_jacobian(out, c) > 0.0)) bad.push_back(c);
    if (bad.empty()) break;
    if (attempt == kMaxRetries)
      throw Error("perturb_random: cell " + std::to_string(bad.front()) + " stays degenerate after resampling");
    for (int c : bad)
      for (int k = 0; k < 4; ++k) {
        const int v = out.cells[c][k];
        if (!mesh.boundary_vertex[v]) out.vertices[v] = mesh.vertices[v] + draw();
      }
  }
  finalize_topology(out);
  return out;
}

void write_mesh(std::ostream& os, const MacroMesh& mesh) {
  os << "MSCV_MESH 1\n";
  os << "dim " << mesh.dim << "\n";
  os << "h " << format_double(mesh.h) << "\n";
  os << "vertices " << mesh.num_vertices() << "\n";
  for (const auto& v : mesh.vertices) {
    for (int a = 0; a < mesh.dim; ++a) os << (a ? " " : "") << format_double(v[a]);
    os << "\n";
  }
  os << "cells " << mesh.num_cells() << "\n";
  const int nv = mesh.vertices_per_cell();
  for (const auto& c : mesh.cells) {
    for (int k = 0; k < nv; ++k) os << (k ? " " : "") << c[k];
    os << "\n";
  }
}

MacroMesh read_mesh(std::istream& is) {
  auto expect = [&](const std::string& word) {
    std::string tok;
    if (!(is >> tok) || tok != word) throw Error("read_mesh: expected '" + word + "'");
  };
  expect("MSCV_MESH");
  int version = 0;
  is >> version;
  if (version != 1) throw Error("read_mesh: unsupported version");
  MacroMesh mesh;
  expect("dim");
  is >> mesh.dim;
  if (mesh.dim != 2 && mesh.dim != 3) throw Error("read_mesh: bad dimension");
  expect("h");
  is >> mesh.h;
  int nv = 0, nc = 0;
  expect("vertices");
  is >> nv;
  mesh.vertices.assign(nv, Vec3::Zero());
  for (auto& v : mesh.vertices)
    for (int a = 0; a < mesh.dim; ++a) is >> v[a];
  expect("cells");
  is >> nc;
  mesh.cells.assign(nc, {-1, -1, -1, -1, -1, -1, -1, -1});
  for (auto& c : mesh.cells)
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      is >> c[k];
      if (c[k] < 0 || c[k] >= nv) throw Error("read_mesh: vertex index out of range");
    }
  if (!is) throw Error("read_mesh: truncated input");
  finalize_topology(mesh);
  return mesh;
}

void write_mesh_file(const std::string& path, const MacroMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_mesh(os, mesh);
}

MacroMesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_mesh(is);
}

}  // namespace mscv
