#include "mscv/material.hpp"
#include "mscv/problems.hpp"

#include <doctest.h>

#include <random>

using namespace mscv;

TEST_SUITE("material") {

TEST_CASE("compliance inverts stiffness") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(1.0, 100.0);
  for (int dim : {2, 3})
    for (int k = 0; k < 20; ++k) {
      Mat3 G = Mat3::Zero();
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G(i, j) = U(rng);
      const Lame m{P(rng), P(rng)};
      CHECK((compliance(stiffness(G, m, dim), m, dim) - G).norm() < 1e-12 * (1 + G.norm()));
      CHECK((stiffness(compliance(G, m, dim), m, dim) - G).norm() < 1e-12 * (1 + G.norm()));
    }
}

TEST_CASE("compliance by hand") {
  // lambda = mu = 1 in 2D: A G = (G - tr G / 4 I) / 2
  Mat3 G = Mat3::Zero();
  G(0, 0) = 2.0;
  G(0, 1) = 1.0;
  const Mat3 A = compliance(G, {1.0, 1.0}, 2);
  CHECK(A(0, 0) == doctest::Approx(0.75));
  CHECK(A(1, 1) == doctest::Approx(-0.25));
  CHECK(A(0, 1) == doctest::Approx(0.5));
  CHECK(A(2, 2) == 0.0);
}

TEST_CASE("nearly incompressible compliance stays bounded") {
  Mat3 I = Mat3::Zero();
  I(0, 0) = I(1, 1) = 1.0;
  // A acting on the identity tends to zero like 1/lambda
  const double a = compliance(I, {1e9, 1.0}, 2).norm();
  CHECK(a < 1e-9);
}

TEST_CASE("material fields") {
  const MacroMesh m = build_structured(6);
  const MaterialField u = uniform_material(m, 2.0, 3.0);
  CHECK(u.size() == 36);
  CHECK(u.at(5).mu == 3.0);
  const MaterialField h = sample_material(m, example3_hetero().material);
  int inside = 0;
  for (int c = 0; c < m.num_cells(); ++c) inside += h.mu[c] > 1.0;
  CHECK(inside == 4);  // the 2x2 middle block of the 6x6 grid
  MaterialField bad = u;
  bad.mu[3] = 0.0;
  CHECK_THROWS_AS(check_material(bad, m), Error);
  bad = u;
  bad.lambda.pop_back();
  CHECK_THROWS_WITH_AS(check_material(bad, m), doctest::Contains("material"), Error);
}

}  // TEST_SUITE
