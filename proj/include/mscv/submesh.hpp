#pragma once

#include "mscv/mesh.hpp"

#include <array>
#include <vector>

namespace mscv {

/// Piece of a macro-element attached to one of its corners. Corners are
/// stored in tensor-product order (bit a of the corner index selects the
/// far side along reference axis a), so the multilinear map is
/// x(xi) = sum_t corners[t] * prod_a (bit_a(t) ? xi_a : 1 - xi_a).
struct Subcell {
  int cell = -1;
  int vertex = -1;
  int local_corner = -1;
  std::array<Vec3, 8> corners{};
  double measure = 0.0;
  Vec3 centroid = Vec3::Zero();
  std::array<int, 3> half_facets{-1, -1, -1};  // the d half-facets touching `vertex`
};

/// Half of a primal edge (2D) or quarter of a primal face (3D). The unit
/// normal points out of cells[0]: towards the higher cell index inside the
/// domain and outwards on the boundary.
struct HalfFacet {
  int facet = -1;
  int vertex = -1;
  std::array<Vec3, 4> corners{};  // 2 endpoints in 2D, 4 tensor-ordered corners in 3D
  Vec3 normal = Vec3::Zero();
  double measure = 0.0;
  Vec3 centroid = Vec3::Zero();
  std::array<int, 2> cells{-1, -1};
  std::array<int, 2> subcells{-1, -1};
  bool boundary = false;
};

/// Facet created inside a macro-element by the subdivision. The normal
/// points from subcells[0] to subcells[1].
struct DualFacet {
  int cell = -1;
  std::array<Vec3, 4> corners{};
  Vec3 normal = Vec3::Zero();
  double measure = 0.0;
  Vec3 centroid = Vec3::Zero();
  std::array<int, 2> subcells{-1, -1};
};

/// Union of the subcells sharing a primal vertex.
struct InteractionRegion {
  int vertex = -1;
  bool boundary = false;
  std::vector<int> subcells;
  std::vector<int> half_facets;
  std::vector<int> cells;
};

struct CellFacetRef {
  int half_facet;
  double sign;  // +1 if the half-facet normal is outward for this cell
};

struct SubMesh {
  MacroMesh macro;
  std::vector<Subcell> subcells;
  std::vector<HalfFacet> half_facets;
  std::vector<DualFacet> dual_facets;
  std::vector<InteractionRegion> regions;  // indexed by primal vertex
  std::vector<std::vector<CellFacetRef>> cell_boundary;  // half-facets on each cell boundary

  int dim() const { return macro.dim; }
  int subcells_per_cell() const { return macro.dim == 2 ? 4 : 8; }
  int subcell_of(int cell, int local_corner) const { return cell * subcells_per_cell() + local_corner; }
  int num_subcells() const { return static_cast<int>(subcells.size()); }
  int num_half_facets() const { return static_cast<int>(half_facets.size()); }
  int num_regions() const { return static_cast<int>(regions.size()); }
};

/// Splits every macro-element at the mean of its vertices. 3D meshes must be
/// axis-aligned cuboids.
SubMesh subdivide(const MacroMesh& mesh);

/// Maps reference coordinates in [0,1]^d to the subcell and returns |det DF|.
Vec3 subcell_map(const SubMesh& sub, int s, const Vec3& xi, double* jacobian = nullptr);

}  // namespace mscv
