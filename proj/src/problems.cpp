#include "mscv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mscv {

namespace {

constexpr double pi = std::numbers::pi;

Hessian zero_hessian() { return {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; }

void set_sym(Mat3& H, int j, int k, double v) {
  H(j, k) = v;
  H(k, j) = v;
}

Vec3 skew_vector(const Mat3& G, int dim) {
  if (dim == 2) return {0.5 * (G(1, 0) - G(0, 1)), 0.0, 0.0};
  return {0.5 * (G(2, 1) - G(1, 2)), 0.5 * (G(0, 2) - G(2, 0)), 0.5 * (G(1, 0) - G(0, 1))};
}

}  // namespace

Mat3 ManufacturedCase::sigma(const Vec3& x) const {
  const Lame m = material(x);
  const Mat3 G = grad_u(x);
  Mat3 s = Mat3::Zero();
  s.topLeftCorner(dim, dim) = m.mu * (G + G.transpose()).topLeftCorner(dim, dim);
  const double div = G.topLeftCorner(dim, dim).trace();
  for (int i = 0; i < dim; ++i) s(i, i) += m.lambda * div;
  return s;
}

Vec3 ManufacturedCase::f(const Vec3& x) const {
  const Lame m = material(x);
  const Hessian H = hess_u(x);
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < dim; ++i) {
    double v = 0.0, ddiv = 0.0;
    for (int j = 0; j < dim; ++j) {
      v += H[i](j, j) + H[j](i, j);
      ddiv += H[j](j, i);
    }
    out[i] = -m.mu * v - m.lambda * ddiv;
  }
  return out;
}

Vec3 ManufacturedCase::rotation(const Vec3& x) const { return skew_vector(grad_u(x), dim); }

Vec3 ManufacturedCase::scaled_rotation(const Vec3& x) const { return 2.0 * material(x).mu * rotation(x); }

ManufacturedCase example1(double lambda, double mu) {
  ManufacturedCase c;
  c.name = "example1";
  c.u = [](const Vec3& p) {
    const double x = p[0], y = p[1];
    return Vec3(std::cos(pi * x) * std::sin(2 * pi * y), std::cos(pi * y) * std::sin(pi * x), 0.0);
  };
  c.grad_u = [](const Vec3& p) {
    const double x = p[0], y = p[1];
    Mat3 G = Mat3::Zero();
    G(0, 0) = -pi * std::sin(pi * x) * std::sin(2 * pi * y);
    G(0, 1) = 2 * pi * std::cos(pi * x) * std::cos(2 * pi * y);
    G(1, 0) = pi * std::cos(pi * y) * std::cos(pi * x);
    G(1, 1) = -pi * std::sin(pi * y) * std::sin(pi * x);
    return G;
  };
  c.hess_u = [](const Vec3& p) {
    const double x = p[0], y = p[1];
    Hessian H = zero_hessian();
    H[0](0, 0) = -pi * pi * std::cos(pi * x) * std::sin(2 * pi * y);
    set_sym(H[0], 0, 1, -2 * pi * pi * std::sin(pi * x) * std::cos(2 * pi * y));
    H[0](1, 1) = -4 * pi * pi * std::cos(pi * x) * std::sin(2 * pi * y);
    H[1](0, 0) = -pi * pi * std::cos(pi * y) * std::sin(pi * x);
    set_sym(H[1], 0, 1, -pi * pi * std::sin(pi * y) * std::cos(pi * x));
    H[1](1, 1) = -pi * pi * std::cos(pi * y) * std::sin(pi * x);
    return H;
  };
  c.material = [=](const Vec3&) { return Lame{lambda, mu}; };
  return c;
}

ManufacturedCase example2_3d(double lambda, double mu) {
  ManufacturedCase c;
  c.name = "example2";
  c.dim = 3;
  const double cs = std::cos(pi / 12), sn = std::sin(pi / 12);
  auto a = [=](const Vec3& p) { return p[1] - cs * (p[1] - 0.5) + sn * (p[2] - 0.5) - 0.5; };
  auto b = [=](const Vec3& p) { return p[2] - sn * (p[1] - 0.5) - cs * (p[2] - 0.5) - 0.5; };
  c.u = [=](const Vec3& p) {
    const double E = std::expm1(p[0]);
    return Vec3(0.0, -E * a(p), -E * b(p));
  };
  c.grad_u = [=](const Vec3& p) {
    const double E = std::expm1(p[0]), ex = std::exp(p[0]);
    Mat3 G = Mat3::Zero();
    G(1, 0) = -ex * a(p);
    G(1, 1) = -E * (1 - cs);
    G(1, 2) = -E * sn;
    G(2, 0) = -ex * b(p);
    G(2, 1) = E * sn;
    G(2, 2) = -E * (1 - cs);
    return G;
  };
  c.hess_u = [=](const Vec3& p) {
    const double ex = std::exp(p[0]);
    Hessian H = zero_hessian();
    H[1](0, 0) = -ex * a(p);
    set_sym(H[1], 0, 1, -ex * (1 - cs));
    set_sym(H[1], 0, 2, -ex * sn);
    H[2](0, 0) = -ex * b(p);
    set_sym(H[2], 0, 1, ex * sn);
    set_sym(H[2], 0, 2, -ex * (1 - cs));
    return H;
  };
  c.material = [=](const Vec3&) { return Lame{lambda, mu}; };
  return c;
}

double example3_indicator(const Vec3& x) {
  return std::min(x[0], x[1]) > 1.0 / 3.0 && std::max(x[0], x[1]) < 2.0 / 3.0 ? 1.0 : 0.0;
}

ManufacturedCase example3_hetero(double kappa) {
  ManufacturedCase c;
  c.name = "example3";
  auto k = [=](const Vec3& p) {
    const double chi = example3_indicator(p);
    return (1.0 - chi) + kappa * chi;
  };
  c.u = [=](const Vec3& p) {
    const double s = std::sin(3 * pi * p[0]) * std::sin(3 * pi * p[1]) / k(p);
    return Vec3(s, s, 0.0);
  };
  c.grad_u = [=](const Vec3& p) {
    const double kk = k(p);
    const double sx = 3 * pi * std::cos(3 * pi * p[0]) * std::sin(3 * pi * p[1]) / kk;
    const double sy = 3 * pi * std::sin(3 * pi * p[0]) * std::cos(3 * pi * p[1]) / kk;
    Mat3 G = Mat3::Zero();
    G(0, 0) = G(1, 0) = sx;
    G(0, 1) = G(1, 1) = sy;
    return G;
  };
  c.hess_u = [=](const Vec3& p) {
    const double kk = k(p);
    const double s = std::sin(3 * pi * p[0]) * std::sin(3 * pi * p[1]) / kk;
    const double sxy = 9 * pi * pi * std::cos(3 * pi * p[0]) * std::cos(3 * pi * p[1]) / kk;
    Hessian H = zero_hessian();
    for (int i = 0; i < 2; ++i) {
      H[i](0, 0) = H[i](1, 1) = -9 * pi * pi * s;
      set_sym(H[i], 0, 1, sxy);
    }
    return H;
  };
  c.material = [=](const Vec3& p) {
    const double kk = k(p);
    return Lame{kk, kk};
  };
  return c;
}

ManufacturedCase example4_incompressible(double lambda, double mu) {
  ManufacturedCase c;
  c.name = "example4";
  const double e = 0.5 / lambda;
  c.u = [=](const Vec3& p) {
    const double x = p[0], y = p[1];
    return Vec3(std::sin(pi * x) * std::sin(pi * y) + e * x, std::cos(pi * x) * std::cos(pi * y) + e * y, 0.0);
  };
  c.grad_u = [=](const Vec3& p) {
    const double x = p[0], y = p[1];
    Mat3 G = Mat3::Zero();
    G(0, 0) = pi * std::cos(pi * x) * std::sin(pi * y) + e;
    G(0, 1) = pi * std::sin(pi * x) * std::cos(pi * y);
    G(1, 0) = -pi * std::sin(pi * x) * std::cos(pi * y);
    G(1, 1) = -pi * std::cos(pi * x) * std::sin(pi * y) + e;
    return G;
  };
  c.hess_u = [](const Vec3& p) {
    const double x = p[0], y = p[1];
    const double ss = std::sin(pi * x) * std::sin(pi * y), cc = std::cos(pi * x) * std::cos(pi * y);
    Hessian H = zero_hessian();
    H[0](0, 0) = H[0](1, 1) = -pi * pi * ss;
    set_sym(H[0], 0, 1, pi * pi * cc);
    H[1](0, 0) = H[1](1, 1) = -pi * pi * cc;
    set_sym(H[1], 0, 1, pi * pi * ss);
    return H;
  };
  c.material = [=](const Vec3&) { return Lame{lambda, mu}; };
  return c;
}

Vec3 example4_printed_load(const Vec3& p) {
  const double x = p[0], y = p[1];
  return {2 * pi * pi * std::sin(pi * x) * std::sin(pi * y), 2 * pi * pi * std::cos(pi * x) * std::cos(pi * y), 0.0};
}

ManufacturedCase linear_patch(double lambda, double mu) {
  ManufacturedCase c;
  c.name = "patch";
  c.u = [](const Vec3& p) { return Vec3(p[0], -p[1], 0.0); };
  c.grad_u = [](const Vec3&) {
    Mat3 G = Mat3::Zero();
    G(0, 0) = 1.0;
    G(1, 1) = -1.0;
    return G;
  };
  c.hess_u = [](const Vec3&) { return zero_hessian(); };
  c.material = [=](const Vec3&) { return Lame{lambda, mu}; };
  return c;
}

DarcyCase darcy_case() {
  DarcyCase c;
  c.p = [](const Vec3& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  c.u = [](const Vec3& x) {
    return Vec3(-pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), -pi * std::sin(pi * x[0]) * std::cos(pi * x[1]),
                0.0);
  };
  c.f = [](const Vec3& x) { return 2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  return c;
}

namespace {

// psi = X(x) X(y) with X = t^2 (1-t)^2 and its derivatives
double bump(double t) { return t * t * (1 - t) * (1 - t); }
double bump1(double t) { return 2 * t * (1 - t) * (1 - 2 * t); }
double bump2(double t) { return 2 * (1 - 6 * t + 6 * t * t); }
double bump3(double t) { return 12 * (2 * t - 1); }

}  // namespace

StokesCase stokes_case() {
  StokesCase c;
  c.u = [](const Vec3& x) { return Vec3(bump(x[0]) * bump1(x[1]), -bump1(x[0]) * bump(x[1]), 0.0); };
  c.p = [](const Vec3& x) { return x[0] - 0.5; };
  c.f = [](const Vec3& x) {
    const double lap1 = bump2(x[0]) * bump1(x[1]) + bump(x[0]) * bump3(x[1]);
    const double lap2 = -(bump3(x[0]) * bump(x[1]) + bump1(x[0]) * bump2(x[1]));
    return Vec3(-lap1 + 1.0, -lap2, 0.0);
  };
  return c;
}

std::string to_string(MeshFamily f) {
  switch (f) {
    case MeshFamily::Structured: return "structured";
    case MeshFamily::Parallelogram: return "parallelogram";
    case MeshFamily::Smooth: return "smooth";
    case MeshFamily::Random: return "random";
  }
  return "?";
}

MeshFamily parse_mesh_family(const std::string& s) {
  if (s == "structured" || s == "uniform") return MeshFamily::Structured;
  if (s == "parallelogram" || s == "h2-parallelogram") return MeshFamily::Parallelogram;
  if (s == "smooth") return MeshFamily::Smooth;
  if (s == "random" || s == "random-h2") return MeshFamily::Random;
  throw Error("unknown mesh family '" + s + "'");
}

MacroMesh family_mesh(MeshFamily fam, int level, int dim, int base, std::uint64_t seed) {
  if (level < 0) throw Error("negative refinement level");
  if (dim == 3 && fam != MeshFamily::Structured) throw Error("3D runs need the structured family");
  const int n = base << level;
  switch (fam) {
    case MeshFamily::Structured: return build_structured(n, Box{}, dim);
    case MeshFamily::Parallelogram: {
      MacroMesh m = apply_map(build_structured(base), MeshMap::ParallelogramSeed);
      for (int l = 0; l < level; ++l) m = refine_uniform(m);
      return m;
    }
    case MeshFamily::Smooth: return apply_map(build_structured(n), MeshMap::Smooth);
    case MeshFamily::Random: return perturb_random(build_structured(n), seed + static_cast<std::uint64_t>(level));
  }
  throw Error("unknown mesh family");
}

double fd_consistency(const ManufacturedCase& c, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  const double h = 1e-5;
  const int d = c.dim;
  auto rel = [](double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); };
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    Vec3 x = Vec3::Zero();
    for (int a = 0; a < d; ++a) x[a] = U(rng);
    // skip points whose FD stencil straddles a material interface
    bool smooth = true;
    const Lame m0 = c.material(x);
    for (int a = 0; a < d && smooth; ++a)
      for (double sgn : {-2.0, 2.0}) {
        Vec3 y = x;
        y[a] += sgn * h;
        const Lame m1 = c.material(y);
        if (m1.lambda != m0.lambda || m1.mu != m0.mu) smooth = false;
      }
    if (!smooth) continue;
    Mat3 Gfd = Mat3::Zero();
    Vec3 divs = Vec3::Zero();
    for (int a = 0; a < d; ++a) {
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      Gfd.col(a) = (c.u(xp) - c.u(xm)) / (2 * h);
      divs += (c.sigma(xp) - c.sigma(xm)).col(a) / (2 * h);
    }
    const Mat3 G = c.grad_u(x);
    const Vec3 f = c.f(x);
    const double gs = std::max(G.norm(), 1e-300);
    worst = std::max(worst, rel(0, (G - Gfd).norm(), gs));
    worst = std::max(worst, rel(0, (f + divs).norm(), std::max(f.norm(), c.sigma(x).norm())));
    Vec3 r = c.rotation(x), rfd = skew_vector(Gfd, d);
    worst = std::max(worst, rel(0, (r - rfd).norm(), gs));
  }
  return worst;
}

}  // namespace mscv
