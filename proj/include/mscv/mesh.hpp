#pragma once

#include "mscv/common.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mscv {

/// Primal facet: an edge in 2D (2 vertices) or a quadrilateral face in 3D
/// (4 vertices). `cells[1] == -1` on the boundary.
struct PrimalFacet {
  std::array<int, 4> vertices{-1, -1, -1, -1};
  std::array<int, 2> cells{-1, -1};
  bool boundary = false;
};

/// Axis-aligned box used for the domain of structured grids.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
};

/*
  Primal quadrilateral (2D) or cuboid (3D) grid.

  2D cells list 4 vertices counter-clockwise. 3D cells list 8 vertices in
  VTK hexahedron order: bottom face (z = lo) counter-clockwise, then the top
  face in the same order. Cell local edge k of a 2D cell joins local
  vertices k and k+1.

  `h` is the nominal mesh size: side/n for a structured grid, halved by
  every uniform refinement and left unchanged by vertex maps.
*/
struct MacroMesh {
  int dim = 2;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 8>> cells;
  std::vector<PrimalFacet> facets;
  std::vector<bool> boundary_vertex;
  double h = 0.0;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }
  int vertices_per_cell() const { return dim == 2 ? 4 : 8; }

  Vec3 cell_center(int c) const;   // arithmetic mean of the cell vertices
  double cell_measure(int c) const;
  double max_diameter() const;
  double total_measure() const;
};

enum class MeshMap { ParallelogramSeed, Smooth };

MacroMesh build_structured(int n, const Box& domain = Box{}, int dim = 2);

/// Recomputes facets, boundary flags and validates cell Jacobians.
void finalize_topology(MacroMesh& mesh);

Vec3 map_point(MeshMap map, const Vec3& p);
MacroMesh apply_map(const MacroMesh& mesh, MeshMap map);

/// Splits each quadrilateral into 4 through its edge midpoints and the
/// average of its vertices.
MacroMesh refine_uniform(const MacroMesh& mesh);

/// Moves every interior vertex uniformly inside the disk of radius h^2.
MacroMesh perturb_random(const MacroMesh& mesh, std::uint64_t seed);

/// Smallest value of the bilinear-map Jacobian over the 4 reference corners.
double min_corner_jacobian(const MacroMesh& mesh, int c);

/// Largest |r34 - r21| over cells, the deviation from a parallelogram.
double max_parallelogram_defect(const MacroMesh& mesh);

void write_mesh(std::ostream& os, const MacroMesh& mesh);
MacroMesh read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const MacroMesh& mesh);
MacroMesh read_mesh_file(const std::string& path);

}  // namespace mscv
