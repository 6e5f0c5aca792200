#pragma once

#include "mscv/problems.hpp"
#include "mscv/submesh.hpp"

#include <random>

namespace mscv::testing {

inline SubMesh family_submesh(MeshFamily fam, int level, int base = 4) { return subdivide(family_mesh(fam, level, 2, base)); }

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = N(rng);
  return v;
}

inline const MeshFamily kAllFamilies[] = {MeshFamily::Structured, MeshFamily::Parallelogram, MeshFamily::Smooth,
                                          MeshFamily::Random};

}  // namespace mscv::testing
