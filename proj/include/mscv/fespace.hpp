#pragma once

#include "mscv/submesh.hpp"

#include <vector>

namespace mscv {

struct BasisPiece {
  int subcell;
  Vec3 value;
};

/// Piecewise-constant vector basis of one interaction region: for every
/// local half-facet, its value on the 1-2 incident subcells.
struct StressBasis {
  int vertex = -1;
  std::vector<int> half_facets;
  std::vector<std::vector<BasisPiece>> pieces;
};

/*
  Degree-of-freedom numbering.
    stress       (half-facet e, row r)  -> d*e + r
    displacement (cell M, component c)  -> d*M + c
    rotation     (unit u, component k)  -> rc*u + k
  A rotation unit is the interaction region (vertex) for Method1 and
  Method1Scaled, and the macro-element for Method2; rc = 1 in 2D, 3 in 3D.
*/
struct DofLayout {
  int dim = 2;
  Method method = Method::Method1;
  int num_half_facets = 0;
  int num_cells = 0;
  int num_rotation_units = 0;
  int rotation_comps = 1;

  int stress_dof(int e, int row) const { return dim * e + row; }
  int disp_dof(int cell, int comp) const { return dim * cell + comp; }
  int rot_dof(int unit, int k) const { return rotation_comps * unit + k; }
  int num_stress() const { return dim * num_half_facets; }
  int num_disp() const { return dim * num_cells; }
  int num_rot() const { return rotation_comps * num_rotation_units; }
  int rotation_unit(const Subcell& s) const { return rotation_on_regions(method) ? s.vertex : s.cell; }
};

DofLayout build_dof_layout(const SubMesh& sub, Method method);

/// Value on subcell s of the basis function dual to the flux functionals:
/// the integral of b.n over half-facet e' equals delta(e, e').
Vec3 flux_dual_basis(const SubMesh& sub, int e, int s);

/// Flux-dual basis for all half-facets of a region.
StressBasis flux_dual_basis(const SubMesh& sub, int region);

/// 2D basis built from unit tangents: on a subcell E next to half-edge e,
/// v_e = t_o / (t_o x t_e), t_o being the tangent of the other half-edge of
/// E. Tangents point towards the region vertex; v_e has unit normal
/// component along t_e rotated clockwise and none across the other edge.
StressBasis stress_basis_2d(const SubMesh& sub, int region);

/// Normal used by stress_basis_2d for half-edge e (t_e rotated clockwise).
Vec3 tangent_basis_normal(const SubMesh& sub, int e);

/// 3D cuboid basis: the unit coordinate vector normal to each quarter-face,
/// on its 1-2 adjacent subcells.
StressBasis stress_basis_3d(const SubMesh& sub, int region);

/// Subcells of a 2D region sorted counter-clockwise around the vertex.
std::vector<int> cyclic_subcells(const SubMesh& sub, int region);

}  // namespace mscv
