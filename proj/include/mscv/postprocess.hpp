#pragma once

#include "mscv/assembly.hpp"

#include <array>
#include <functional>
#include <vector>

namespace mscv {

/// Lowest-order Raviart-Thomas field per macro-element and stress row:
/// outward fluxes through the 4 cell edges (edge k joins local vertices k
/// and k+1), mapped with the contravariant Piola transform.
struct Rt0Stress {
  int dim = 2;
  std::vector<std::array<std::array<double, 4>, 2>> flux;  // [cell][row][edge]

  /// Value of row `row` at reference point xi of the cell.
  Vec3 eval(const MacroMesh& mesh, int cell, int row, const Vec3& xi) const;
  /// Cell average of the divergence, d components.
  Vec3 mean_divergence(const MacroMesh& mesh, int cell) const;
};

/// Cell edge k -> half-facets on it with their outward signs.
std::vector<std::array<std::array<CellFacetRef, 2>, 4>> cell_edge_half_facets(const SubMesh& sub);

Rt0Stress project_rt0(const McsvSolution& sol, const SubMesh& sub);

/// Area-weighted mean of the subcell tensors of every macro-element.
std::vector<Mat3> mean_stress(const McsvSolution& sol, const SubMesh& sub);

/// Center of mass of each macro-element.
std::vector<Vec3> cell_centroids(const SubMesh& sub);

/// Per cell: integral of sigma_h n over the cell boundary plus F_M.
std::vector<Vec3> conservation_residual(const McsvSolution& sol, const SubMesh& sub, const Eigen::VectorXd& F);

struct ExactFields {
  std::function<Mat3(const Vec3&)> sigma;
  std::function<Vec3(const Vec3&)> u;
  std::function<Vec3(const Vec3&)> gamma;
};

/// Rotation error: L2 integral, or |unit| weighted samples at the region
/// vertex (or the cell center of mass for per-cell rotations).
enum class GammaNorm { Integral, Sample };

struct ErrorOptions {
  int points = 3;  // Gauss points per direction and subcell
  GammaNorm gamma = GammaNorm::Sample;
};

/*
  Relative errors.
    sigma       L2 over subcells
    mean_sigma  cell means against sigma at the cell center of mass
    u           L2 with u_h constant per cell
    gamma       L2 over the rotation units (regions or cells)
    u_0h        u_h against u at the cell center of mass, area weighted
  `absolute` flags quantities whose exact norm vanished; they hold the
  absolute error instead.
*/
struct ErrorRecord {
  double sigma = 0.0;
  double mean_sigma = 0.0;
  double u = 0.0;
  double gamma = 0.0;
  double u_0h = 0.0;
  std::array<bool, 5> absolute{};
};

ErrorRecord error_norms(const McsvSolution& sol, const ExactFields& exact, const SubMesh& sub,
                        const ErrorOptions& opts = {});

}  // namespace mscv
