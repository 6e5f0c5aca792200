#include "helpers.hpp"

#include "mscv/assembly.hpp"

#include <doctest.h>

#include <random>

using namespace mscv;

namespace {

MaterialField random_material(const MacroMesh& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(1.0, 100.0);
  MaterialField f = uniform_material(m, 1.0, 1.0);
  for (int c = 0; c < m.num_cells(); ++c) {
    f.lambda[c] = U(rng);
    f.mu[c] = U(rng);
  }
  return f;
}

Eigen::MatrixXd scatter(const std::vector<RegionBlock>& blocks, int rows, int cols, int which) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
  for (const RegionBlock& b : blocks) {
    const Eigen::MatrixXd& L = which == 0 ? b.A_ss : which == 1 ? b.A_su : b.A_sg;
    const std::vector<int>& rdofs = which == 0 ? b.stress_dofs : which == 1 ? b.disp_dofs : b.rot_dofs;
    for (int i = 0; i < L.rows(); ++i)
      for (int j = 0; j < L.cols(); ++j) M(rdofs[i], b.stress_dofs[j]) += L(i, j);
  }
  return M;
}

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("skew basis") {
  const Mat3 S = skew_basis(2, 0);
  CHECK(S(0, 1) == -1.0);
  CHECK(S(1, 0) == 1.0);
  for (int k = 0; k < 3; ++k) {
    const Mat3 T = skew_basis(3, k);
    CHECK((T + T.transpose()).norm() == 0.0);
    // T x = e_k cross x
    const Vec3 x(0.3, -1.2, 2.0);
    CHECK((T * x - Vec3::Unit(k).cross(x)).norm() < 1e-15);
  }
}

TEST_CASE("stress blocks are symmetric positive definite on every family") {
  for (MeshFamily fam : testing::kAllFamilies)
    for (Method method : {Method::Method1, Method::Method2}) {
      const SubMesh sub = testing::family_submesh(fam, 1);
      const MaterialField mat = random_material(sub.macro, 5);
      const VertexBlockSystem sys = assemble_blocks(sub, mat, build_dof_layout(sub, method), Variant::Plain);
      for (const RegionBlock& b : sys.blocks) {
        CHECK((b.A_ss - b.A_ss.transpose()).norm() <= 1e-13 * b.A_ss.norm());
        Eigen::LLT<Eigen::MatrixXd> llt(b.A_ss);
        CHECK(llt.info() == Eigen::Success);
      }
    }
}

TEST_CASE("serial and parallel assembly agree") {
  const SubMesh sub = testing::family_submesh(MeshFamily::Random, 2);
  const MaterialField mat = random_material(sub.macro, 9);
  const DofLayout L = build_dof_layout(sub, Method::Method1);
  const auto a = assemble_blocks(sub, mat, L, Variant::Plain, Exec::Serial);
  const auto b = assemble_blocks(sub, mat, L, Variant::Plain, Exec::Parallel);
  for (size_t r = 0; r < a.blocks.size(); ++r) {
    CHECK((a.blocks[r].A_ss - b.blocks[r].A_ss).norm() == 0.0);
    CHECK((a.blocks[r].A_sg - b.blocks[r].A_sg).norm() == 0.0);
  }
}

TEST_CASE("vertex blocks equal the quadrature-assembled saddle blocks") {
  for (MeshFamily fam : {MeshFamily::Structured, MeshFamily::Smooth})
    for (Method method : {Method::Method1, Method::Method2, Method::Method1Scaled}) {
      const SubMesh sub = testing::family_submesh(fam, 0, 2);
      const MaterialField mat = random_material(sub.macro, 17);
      const DofLayout L = build_dof_layout(sub, method);
      const VertexBlockSystem sys = assemble_blocks(sub, mat, L, variant_of(method));
      LoadVectors zero{Eigen::VectorXd::Zero(L.num_disp()), Eigen::VectorXd::Zero(L.num_stress())};
      const SaddleSystem S = assemble_full_saddle(sub, mat, L, zero, variant_of(method));
      const Eigen::MatrixXd K(S.K);
      const int ns = L.num_stress(), nu = L.num_disp(), ng = L.num_rot();
      const Eigen::MatrixXd Ass = scatter(sys.blocks, ns, ns, 0);
      const Eigen::MatrixXd Asu = scatter(sys.blocks, nu, ns, 1);
      const Eigen::MatrixXd Asg = scatter(sys.blocks, ng, ns, 2);
      CHECK((K.topLeftCorner(ns, ns) - Ass).norm() < 1e-12 * Ass.norm());
      const Eigen::MatrixXd Ku = K.block(ns, 0, nu, ns);
      CHECK(std::min((Ku - Asu).norm(), (Ku + Asu).norm()) < 1e-12 * Asu.norm());
      const Eigen::MatrixXd Kg = K.block(ns + nu, 0, ng, ns);
      CHECK(std::min((Kg - Asg).norm(), (Kg + Asg).norm()) < 1e-12 * Asg.norm());
    }
}

TEST_CASE("load vectors") {
  const SubMesh sub = testing::family_submesh(MeshFamily::Smooth, 1);
  const DofLayout L = build_dof_layout(sub, Method::Method2);
  const VectorField f = [](const Vec3&) { return Vec3(2.0, -1.0, 0.0); };
  const VectorField g = [](const Vec3& x) { return Vec3(x[0], 0.0, 0.0); };
  for (int pts : {0, 2}) {
    RhsOptions o;
    o.body_points = pts;
    const LoadVectors lv = assemble_rhs(sub, L, f, g, o);
    double fx = 0.0;
    for (int c = 0; c < sub.macro.num_cells(); ++c) {
      CHECK(lv.F[L.disp_dof(c, 0)] == doctest::Approx(2.0 * sub.macro.cell_measure(c)));
      fx += lv.F[L.disp_dof(c, 0)];
    }
    CHECK(fx == doctest::Approx(2.0));
    for (int e = 0; e < sub.num_half_facets(); ++e)
      if (!sub.half_facets[e].boundary) CHECK(lv.G.segment(2 * e, 2).norm() == 0.0);
  }
  const LoadVectors none = assemble_rhs(sub, L, nullptr, nullptr);
  CHECK(none.F.norm() == 0.0);
  CHECK(none.G.norm() == 0.0);
}

TEST_CASE("invalid material is reported") {
  const SubMesh sub = testing::family_submesh(MeshFamily::Structured, 0);
  MaterialField mat = uniform_material(sub.macro, 1.0, 1.0);
  mat.mu[2] = -1.0;
  CHECK_THROWS_AS(assemble_blocks(sub, mat, build_dof_layout(sub, Method::Method1), Variant::Plain), Error);
}

}  // TEST_SUITE
