#pragma once

#include "mscv/submesh.hpp"

#include <functional>
#include <vector>

namespace mscv {

struct QuadPoint {
  double x;
  double w;
};

/// Gauss-Legendre rule with n points on [0, 1].
std::vector<QuadPoint> gauss_legendre(int n);

/// Tensor Gauss rule on a subcell mapped through its multilinear map.
/// Calls fn(x, weight) with weights that sum to the subcell measure.
void for_each_subcell_point(const SubMesh& sub, int s, int n,
                            const std::function<void(const Vec3&, double)>& fn);

/// Tensor Gauss rule on a half-facet (segment in 2D, rectangle in 3D).
void for_each_half_facet_point(const SubMesh& sub, int e, int n,
                               const std::function<void(const Vec3&, double)>& fn);

}  // namespace mscv
