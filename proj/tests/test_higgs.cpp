#include <doctest.h>

#include "pklab/higgs.hpp"

using namespace pklab;

namespace {

HiggsBundle standard_bundle(int n, int k) {
  return HiggsBundle{standard_symplectic(n), standard_complex_structure(n), standard_frame(n), k};
}

HiggsBundle random_bundle(int n, int k, std::mt19937_64& rng) {
  const auto s = standard_symplectic(n);
  const auto j = random_compatible(n, rng);
  return HiggsBundle{s, j, adapted_frame(s, j), k};
}

BsdPoint random_point(int n, std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> nd;
  CMat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m(a, b) = m(b, a) = cd(nd(rng), nd(rng));
  Eigen::JacobiSVD<CMat> svd(m);
  return make_bsd_point(m * (std::sqrt(radius) / svd.singularValues()(0)));
}

BsdPoint origin(int n) { return make_bsd_point(CMat::Zero(n, n)); }

}  // namespace

TEST_CASE("n = 1 Higgs field at the origin sends dz to dz-bar") {
  const auto f = higgs_frame(standard_bundle(1, 1), origin(1));
  REQUIRE(f.theta.size() == 1);
  CVec dz(2), dzbar(2);
  dz << 1.0, kI;
  dzbar << 1.0, -kI;
  CHECK(max_abs(f.theta[0] * dz - dzbar) < 1e-15);
  CHECK(max_abs(f.theta[0] * dzbar) < 1e-15);
  CHECK(max_abs(f.proj[1] + f.proj[0] - CMat::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(f.proj[1] * dz - dz) < 1e-15);
  CHECK(adjoint_check(f) < 1e-12);
}

TEST_CASE("degree zero is a trivial line") {
  const auto b = standard_bundle(2, 0);
  const auto f = higgs_frame(b, origin(2));
  CHECK(f.rank() == 1);
  for (const auto& t : f.theta) CHECK(max_abs(t) == 0.0);
  CHECK(adjoint_check(f) == 0.0);
  std::mt19937_64 rng(1);
  const auto p = random_point(2, rng, 0.5);
  CHECK(connection_split_check(b, p) == 0.0);
  CHECK(max_abs(curvature_operator(b, p, 0, 1)) == 0.0);
  CHECK(flatness_check(b, p).max() == 0.0);
}

TEST_CASE("degree out of range") {
  CHECK_THROWS_AS(higgs_frame(standard_bundle(1, 3), origin(1)), DimensionError);
}

TEST_CASE("exact identities: projector partition, theta type, theta^2 = 0, theta^* = conj(theta)") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= 2 * n; ++k) {
      const auto b = random_bundle(n, k, rng);
      const auto rep = algebraic_check(higgs_frame(b, random_point(n, rng, 0.6)));
      CHECK(rep.partition < 1e-10);
      CHECK(rep.theta_type < 1e-10);
      CHECK(rep.theta_square < 1e-10);
      CHECK(rep.adjoint < 1e-10);
    }
  }
}

TEST_CASE("n = 2, k = 2: block sparsity of theta") {
  const auto f = higgs_frame(standard_bundle(2, 2), origin(2));
  for (const auto& t : f.theta) {
    CHECK(max_abs(t * f.proj[0]) < 1e-14);                    // kills (0,2)
    CHECK(max_abs(f.proj[0] * t * f.proj[1] - t * f.proj[1]) < 1e-14);  // (1,1) -> (0,2)
    CHECK(max_abs(f.proj[1] * t * f.proj[2] - t * f.proj[2]) < 1e-14);  // (2,0) -> (1,1)
  }
}

TEST_CASE("nabla = D + theta + conj(theta) on frame sections") {
  CHECK(connection_split_check(standard_bundle(1, 1), origin(1)) < 1e-6);
  std::mt19937_64 rng(3);
  CHECK(connection_split_check(standard_bundle(2, 1), random_point(2, rng, 0.9)) < 1e-5);
  for (int k = 1; k <= 2; ++k) {
    CHECK(connection_split_check(random_bundle(2, k, rng), random_point(2, rng, 0.5)) < 1e-5);
  }
}

TEST_CASE("D is metric compatible and theta is holomorphic") {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k <= 2; ++k) {
      const auto b = random_bundle(n, k, rng);
      const auto p = random_point(n, rng, 0.5);
      CHECK(metric_compatibility_check(b, p) < 1e-5);
      CHECK(theta_holomorphicity_check(b, p) < 1e-5);
    }
}

TEST_CASE("curvature of D at the origin for n = 1 is -[theta, theta^*]") {
  const auto b = standard_bundle(1, 1);
  const CMat theta = curvature_operator(b, origin(1), 0, 0);
  // Express in the basis (dz, dz-bar).
  CMat basis(2, 2);
  basis << 1.0, 1.0, kI, -kI;
  const CMat in_basis = basis.inverse() * theta * basis;
  CMat expected = CMat::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  CHECK(max_abs(in_basis - expected) < 1e-6);
}

TEST_CASE("curvature identity at random basepoints") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k <= 2; ++k) {
      const auto b = random_bundle(n, k, rng);
      CHECK(curvature_identity_check(b, random_point(n, rng, 0.5)) < 1e-5);
    }
}

TEST_CASE("flatness") {
  const auto r1 = flatness_check(standard_bundle(1, 1), origin(1));
  CHECK(r1.plaquette < 1e-5);
  std::mt19937_64 rng(6);
  const auto r2 = flatness_check(random_bundle(2, 2, rng), random_point(2, rng, 0.5));
  CHECK(r2.antiholomorphic < 1e-5);
  CHECK(r2.holomorphic < 1e-5);
  CHECK(r2.theta_closed < 1e-5);
  CHECK(r2.plaquette < 1e-5);
}

TEST_CASE("stencil outside the domain") {
  const auto p = make_bsd_point(CMat::Constant(1, 1, cd(0.99999)));
  CHECK_THROWS_AS(connection_split_check(standard_bundle(1, 1), p, FdOptions{0.01, true}), DomainError);
}
