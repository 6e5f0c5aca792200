#pragma once

#include "mscv/mesh.hpp"

#include <functional>
#include <vector>

namespace mscv {

struct Lame {
  double lambda;
  double mu;
};

/// Lamé pair per macro-element.
struct MaterialField {
  std::vector<double> lambda;
  std::vector<double> mu;

  int size() const { return static_cast<int>(mu.size()); }
  Lame at(int cell) const { return {lambda[cell], mu[cell]}; }
};

MaterialField uniform_material(const MacroMesh& mesh, double lambda, double mu);

/// Samples fn at every cell center.
MaterialField sample_material(const MacroMesh& mesh, const std::function<Lame(const Vec3&)>& fn);

/// Throws unless the field has one positive pair per cell.
void check_material(const MaterialField& mat, const MacroMesh& mesh);

/// A G = (G - lambda/(d lambda + 2 mu) tr(G) I) / (2 mu) on the leading d x d block.
Mat3 compliance(const Mat3& G, Lame m, int dim);

/// Inverse of compliance: 2 mu G + lambda tr(G) I.
Mat3 stiffness(const Mat3& G, Lame m, int dim);

}  // namespace mscv
