#pragma once

#include "mscv/assembly.hpp"
#include "mscv/solver.hpp"

#include <functional>
#include <vector>

namespace mscv {

using ScalarField = std::function<double(const Vec3&)>;

/// Scalar flux space of one interaction region: mass matrix of the
/// flux-dual basis and the signed cell divergence of each basis function.
struct RegionFluxBlock {
  int region = -1;
  std::vector<int> half_facets;
  std::vector<int> cells;
  Eigen::MatrixXd mass;  // half_facets x half_facets
  Eigen::MatrixXd div;   // cells x half_facets, +-1 entries
};

RegionFluxBlock region_flux_block(const SubMesh& sub, int region);

// ---------------------------------------------------------------- Darcy

struct DarcySolution {
  Eigen::VectorXd flux;           // integral of u.n per half-facet
  std::vector<Vec3> velocity;     // per subcell
  Eigen::VectorXd pressure;       // per macro-cell
  SolveReport report;
};

/// u = -grad p, div u = f with p = g on the boundary. Velocity is eliminated
/// region by region; the pressure system is SPD.
DarcySolution solve_darcy(const SubMesh& sub, const ScalarField& f, const ScalarField& g,
                          const SolveOptions& opts = {}, int body_points = 0);

/// Same discrete problem assembled as one indefinite system (flux, pressure)
/// and solved with dense LU. For small meshes.
DarcySolution solve_darcy_saddle(const SubMesh& sub, const ScalarField& f, const ScalarField& g,
                                 int body_points = 0);

/// Per cell: outgoing flux minus the integral of f.
std::vector<double> darcy_mass_balance(const DarcySolution& sol, const SubMesh& sub, const ScalarField& f,
                                       int body_points = 0);

struct DarcyErrors {
  double velocity = 0.0;  // relative L2 over subcells
  double pressure = 0.0;  // relative, cell centers, area weighted
};

DarcyErrors darcy_errors(const DarcySolution& sol, const SubMesh& sub, const VectorField& u, const ScalarField& p);

// ---------------------------------------------------------------- Stokes

/*
  Velocity gradient w: d rows of flux-dual coefficients per half-facet
  (numbered like the stress). Velocity: d per cell. Pressure: one value per
  interaction region, i.e. per primal vertex.
*/
enum class Gauge { ZeroMean, None };

struct StokesOptions {
  Gauge gauge = Gauge::ZeroMean;
  double tol = 1e-12;
  int max_iter = 0;  // 0: 50 sqrt(n) + 50
  int body_points = 2;
  int singular_value_limit = 1500;  // coupled systems up to this size get an SVD
};

struct StokesSolution {
  Eigen::VectorXd gradient;        // flux coefficients, d per half-facet
  std::vector<Mat3> gradient_cells;  // per subcell
  Eigen::VectorXd velocity;        // d per cell
  Eigen::VectorXd pressure;        // per vertex
  int iterations = 0;
  double schur_residual = 0.0;
  double divergence = 0.0;         // max over q of |b_h(u_h, q)|
  double min_singular_value = -1.0;  // -1 when the system was too large
  int pressure_kernel = -1;        // singular values below 1e-10 beyond the gauge; -1 if not computed
};

/// -div w + grad p = f, w = grad u, div u = 0, u = 0 on the boundary.
StokesSolution solve_stokes(const SubMesh& sub, const VectorField& f, const StokesOptions& opts = {});

/// Discrete forms, evaluated literally from their facet sums.
///   B(w, v)   over primal half-facets, B*(v, w) over dual facets
///   b*(q, v)  over primal half-facets, b(v, q)  over dual facets
double stokes_B(const SubMesh& sub, const Eigen::VectorXd& w, const Eigen::VectorXd& v);
double stokes_B_star(const SubMesh& sub, const Eigen::VectorXd& v, const Eigen::VectorXd& w);
double stokes_b_star(const SubMesh& sub, const Eigen::VectorXd& q, const Eigen::VectorXd& v);
double stokes_b(const SubMesh& sub, const Eigen::VectorXd& v, const Eigen::VectorXd& q);

/// Relative velocity error at cell centers of mass, area weighted.
double stokes_velocity_error(const StokesSolution& sol, const SubMesh& sub, const VectorField& u);

}  // namespace mscv
