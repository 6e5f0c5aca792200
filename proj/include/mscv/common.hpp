#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mscv {

// Points and tensors are stored in 3D; 2D code uses the leading components.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Raised for every invalid input, degenerate geometry and solver failure.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Selects between the OpenMP kernels and their serial reference versions.
enum class Exec { Serial, Parallel };

/// Rotation space and formulation of the elasticity scheme.
///   Method1       rotation constant on each interaction region
///   Method2       rotation constant on each macro-element
///   Method1Scaled Method1 with the scaled rotation A^{-1} gamma
enum class Method { Method1, Method2, Method1Scaled };

inline bool rotation_on_regions(Method m) { return m != Method::Method2; }

std::string to_string(Method m);
Method parse_method(const std::string& s);

inline int rotation_components(int dim) { return dim == 2 ? 1 : 3; }

}  // namespace mscv
