#include "mscv/material.hpp"

namespace mscv {

MaterialField uniform_material(const MacroMesh& mesh, double lambda, double mu) {
  MaterialField m;
  m.lambda.assign(mesh.num_cells(), lambda);
  m.mu.assign(mesh.num_cells(), mu);
  return m;
}

MaterialField sample_material(const MacroMesh& mesh, const std::function<Lame(const Vec3&)>& fn) {
  MaterialField m;
  m.lambda.resize(mesh.num_cells());
  m.mu.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Lame l = fn(mesh.cell_center(c));
    m.lambda[c] = l.lambda;
    m.mu[c] = l.mu;
  }
  return m;
}

void check_material(const MaterialField& mat, const MacroMesh& mesh) {
  if (mat.size() != mesh.num_cells() || static_cast<int>(mat.lambda.size()) != mesh.num_cells())
    throw Error("material missing on some cells: have " + std::to_string(mat.size()) + ", need " +
                std::to_string(mesh.num_cells()));
  for (int c = 0; c < mat.size(); ++c)
    if (!(mat.mu[c] > 0.0) || !(mat.lambda[c] > 0.0))
      throw Error("material on cell " + std::to_string(c) + " needs lambda > 0 and mu > 0");
}

Mat3 compliance(const Mat3& G, Lame m, int dim) {
  const double tr = G.topLeftCorner(dim, dim).trace();
  Mat3 out = Mat3::Zero();
  out.topLeftCorner(dim, dim) = G.topLeftCorner(dim, dim);
  out.topLeftCorner(dim, dim).diagonal().array() -= m.lambda / (dim * m.lambda + 2.0 * m.mu) * tr;
  return out / (2.0 * m.mu);
}

Mat3 stiffness(const Mat3& G, Lame m, int dim) {
  const double tr = G.topLeftCorner(dim, dim).trace();
  Mat3 out = Mat3::Zero();
  out.topLeftCorner(dim, dim) = 2.0 * m.mu * G.topLeftCorner(dim, dim);
  out.topLeftCorner(dim, dim).diagonal().array() += m.lambda * tr;
  return out;
}

}  // namespace mscv
