#pragma once

#include "mscv/fespace.hpp"
#include "mscv/material.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace mscv {

using VectorField = std::function<Vec3(const Vec3&)>;

enum class Variant { Plain, Scaled };

inline Variant variant_of(Method m) { return m == Method::Method1Scaled ? Variant::Scaled : Variant::Plain; }

/// Skew tensor paired with rotation component k: [[0,-1],[1,0]] in 2D and
/// the cross-product matrix of e_k in 3D.
Mat3 skew_basis(int dim, int k);

/// Dense blocks of one interaction region. Local stress index j*d + r is
/// row r of the flux-dual basis function of half_facets[j].
struct RegionBlock {
  int region = -1;
  std::vector<int> stress_dofs;
  std::vector<int> disp_dofs;
  std::vector<int> rot_dofs;
  Eigen::MatrixXd A_ss;  // m x m
  Eigen::MatrixXd A_su;  // disp x m
  Eigen::MatrixXd A_sg;  // rot x m
};

struct VertexBlockSystem {
  DofLayout layout;
  Variant variant = Variant::Plain;
  std::vector<RegionBlock> blocks;  // indexed by region
  Eigen::VectorXd F;                // displacement equation
  Eigen::VectorXd G;                // stress equation
};

VertexBlockSystem assemble_blocks(const SubMesh& sub, const MaterialField& mat, const DofLayout& layout,
                                  Variant variant, Exec exec = Exec::Parallel);

/// Where the Dirichlet data of a boundary half-facet is taken from: the
/// value at the center of its primal facet, or a Gauss mean over the
/// half-facet itself.
enum class BoundaryRule { FacetCenter, HalfFacetMean };

struct RhsOptions {
  int body_points = 0;  // Gauss points per direction and subcell; 0: f at the cell center times |M|
  BoundaryRule boundary = BoundaryRule::FacetCenter;
  int boundary_points = 1;  // HalfFacetMean only
};

struct LoadVectors {
  Eigen::VectorXd F;
  Eigen::VectorXd G;
};

/// F(M, c) = integral of f_c over M. G(e, r) = g_r on the boundary
/// half-facet e, sampled as selected by the options.
LoadVectors assemble_rhs(const SubMesh& sub, const DofLayout& layout, const VectorField& f,
                         const VectorField& g, RhsOptions opts = {});

/// Unreduced symmetric indefinite system over [stress; displacement; rotation]
/// built subcell by subcell with quadrature and dual-facet jumps.
struct SaddleSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd rhs;
  int num_stress = 0;
  int num_disp = 0;
  int num_rot = 0;
};

SaddleSystem assemble_full_saddle(const SubMesh& sub, const MaterialField& mat, const DofLayout& layout,
                                  const LoadVectors& rhs, Variant variant);

}  // namespace mscv

namespace mscv {

/// Discrete stress, displacement and rotation. The stress is kept both as
/// flux-dual coefficients and as one d x d tensor per subcell.
struct McsvSolution {
  DofLayout layout;
  Eigen::VectorXd stress;
  Eigen::VectorXd disp;
  Eigen::VectorXd rot;
  std::vector<Mat3> sigma;

  Vec3 displacement(int cell) const;
  /// Rotation of unit u (region or cell); 3 components in 3D, else in [0].
  Vec3 rotation(int unit) const;
};

/// Tensor per subcell from stress coefficients.
std::vector<Mat3> stress_on_subcells(const SubMesh& sub, const DofLayout& layout, const Eigen::VectorXd& coeffs);

}  // namespace mscv
