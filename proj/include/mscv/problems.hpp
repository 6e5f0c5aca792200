#pragma once

#include "mscv/material.hpp"

#include <array>
#include <functional>
#include <string>

namespace mscv {

using Hessian = std::array<Mat3, 3>;  // H[i](j, k) = d_j d_k u_i

/*
  Exact displacement with hand-coded first and second derivatives. The
  stress, body force and rotation are derived from them:
    sigma = mu (grad u + grad u^T) + lambda div u I
    f     = -div sigma (material constant near x)
    gamma = skew part of grad u, 1/2 (d_x u_2 - d_y u_1) in 2D and
            1/2 curl u in 3D; the scaled rotation is 2 mu gamma.
*/
struct ManufacturedCase {
  std::string name;
  int dim = 2;
  Box domain;
  std::function<Vec3(const Vec3&)> u;
  std::function<Mat3(const Vec3&)> grad_u;  // (i, j) = d_j u_i
  std::function<Hessian(const Vec3&)> hess_u;
  std::function<Lame(const Vec3&)> material;

  Mat3 sigma(const Vec3& x) const;
  Vec3 f(const Vec3& x) const;
  Vec3 rotation(const Vec3& x) const;
  Vec3 scaled_rotation(const Vec3& x) const;
  Vec3 g(const Vec3& x) const { return u(x); }
};

ManufacturedCase example1(double lambda = 123.0, double mu = 79.3);
ManufacturedCase example2_3d(double lambda = 79.3, double mu = 79.3);
ManufacturedCase example3_hetero(double kappa = 1e6);
ManufacturedCase example4_incompressible(double lambda = 1e6, double mu = 1.0);
/// u = (x, -y): constant stress, zero rotation.
ManufacturedCase linear_patch(double lambda, double mu);

/// The load printed for Example 4, (2 pi^2 sin sin, 2 pi^2 cos cos); equal to
/// -div sigma because div u is constant.
Vec3 example4_printed_load(const Vec3& x);

/// 1 inside (1/3, 2/3)^2, else 0.
double example3_indicator(const Vec3& x);

/// Darcy: p = sin(pi x) sin(pi y), u = -grad p, f = div u.
struct DarcyCase {
  std::function<double(const Vec3&)> p;
  std::function<Vec3(const Vec3&)> u;
  std::function<double(const Vec3&)> f;
};
DarcyCase darcy_case();

/// Stokes: u = curl of x^2 (1-x)^2 y^2 (1-y)^2, p = x - 1/2, f = -lap u + grad p.
struct StokesCase {
  std::function<Vec3(const Vec3&)> u;
  std::function<double(const Vec3&)> p;
  std::function<Vec3(const Vec3&)> f;
};
StokesCase stokes_case();

enum class MeshFamily { Structured, Parallelogram, Smooth, Random };

std::string to_string(MeshFamily f);
MeshFamily parse_mesh_family(const std::string& s);

/// Mesh of refinement level l with n = base 2^l cells per side.
/// Parallelogram: mapped 4x4 seed refined l times. Smooth: map applied to
/// the structured grid. Random: structured grid perturbed with seed + l.
MacroMesh family_mesh(MeshFamily fam, int level, int dim = 2, int base = 4, std::uint64_t seed = 2024);

/// Central-difference check of f, sigma and gamma at `samples` random
/// interior points. Returns the largest relative discrepancy.
double fd_consistency(const ManufacturedCase& c, int samples = 100, std::uint64_t seed = 7);

}  // namespace mscv
