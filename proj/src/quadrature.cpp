#include "mscv/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace mscv {

std::vector<QuadPoint> gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one point");
  std::vector<QuadPoint> rule(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev guess.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    rule[i] = {0.5 * (1.0 - t), 1.0 / ((1.0 - t * t) * dp * dp)};
  }
  return rule;
}

void for_each_subcell_point(const SubMesh& sub, int s, int n,
                            const std::function<void(const Vec3&, double)>& fn) {
  const auto rule = gauss_legendre(n);
  if (sub.dim() == 2) {
    for (const auto& qx : rule)
      for (const auto& qy : rule) {
        double J = 0.0;
        const Vec3 x = subcell_map(sub, s, Vec3(qx.x, qy.x, 0.0), &J);
        fn(x, qx.w * qy.w * J);
      }
    return;
  }
  for (const auto& qx : rule)
    for (const auto& qy : rule)
      for (const auto& qz : rule) {
        double J = 0.0;
        const Vec3 x = subcell_map(sub, s, Vec3(qx.x, qy.x, qz.x), &J);
        fn(x, qx.w * qy.w * qz.w * J);
      }
}

void for_each_half_facet_point(const SubMesh& sub, int e, int n,
                               const std::function<void(const Vec3&, double)>& fn) {
  const auto rule = gauss_legendre(n);
  const HalfFacet& hf = sub.half_facets[e];
  if (sub.dim() == 2) {
    for (const auto& q : rule) fn((1.0 - q.x) * hf.corners[0] + q.x * hf.corners[1], q.w * hf.measure);
    return;
  }
  const Vec3 &p0 = hf.corners[0], &p1 = hf.corners[1], &p2 = hf.corners[2];
  for (const auto& qa : rule)
    for (const auto& qb : rule)
      fn(p0 + qa.x * (p1 - p0) + qb.x * (p2 - p0), qa.w * qb.w * hf.measure);
}

}  // namespace mscv
