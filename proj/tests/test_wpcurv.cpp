#include <doctest.h>

#include "pklab/wpcurv.hpp"

using namespace pklab;

namespace {

HiggsBundle standard_bundle(int n, int k = 1) {
  return HiggsBundle{standard_symplectic(n), standard_complex_structure(n), standard_frame(n), k};
}

HiggsBundle random_bundle(int n, std::mt19937_64& rng) {
  const auto s = standard_symplectic(n);
  const auto j = random_compatible(n, rng);
  return HiggsBundle{s, j, adapted_frame(s, j), 1};
}

BsdPoint random_point(int n, std::mt19937_64& rng, double norm) {
  std::normal_distribution<double> nd;
  CMat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m(a, b) = m(b, a) = cd(nd(rng), nd(rng));
  return make_bsd_point(m * (norm / Eigen::JacobiSVD<CMat>(m).singularValues()(0)));
}

BsdPoint origin(int n) { return make_bsd_point(CMat::Zero(n, n)); }

}  // namespace

TEST_CASE("metric at the origin") {
  CHECK(std::abs(df_metric(standard_bundle(1), origin(1)).gram(0, 0) - 1.0) < 1e-15);
  CHECK(max_abs(df_metric(standard_bundle(2, 0), origin(2)).gram) == 0.0);
}

TEST_CASE("metric is Hermitian positive definite and Kahler") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n) {
    const auto b = random_bundle(n, rng);
    const auto p = random_point(n, rng, 0.7);
    const CMat g = df_metric(b, p).gram;
    CHECK(max_abs(g - g.adjoint()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<CMat> es(g);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(kahler_closedness(b, p) < 1e-6 * max_abs(g));
  }
}

TEST_CASE("n = 1 disc: G = (1 - |t|^2)^{-2}") {
  // The hyperbolic disc of curvature -2, checked at a few radii.
  for (double r : {0.1, 0.4, 0.7}) {
    const auto p = make_bsd_point(CMat::Constant(1, 1, cd(r * 0.6, r * 0.8)));
    const double g = df_metric(standard_bundle(1), p).gram(0, 0).real();
    CHECK(g == doctest::Approx(1.0 / ((1 - r * r) * (1 - r * r))).epsilon(1e-12));
  }
}

TEST_CASE("degree ratios are constant across entries") {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 3; ++n) {
    auto b = random_bundle(n, rng);
    const auto p = random_point(n, rng, 0.6);
    for (int k = 1; k <= 2 * n - 1; ++k) {
      b.k = k;
      const auto r = degree_ratio(b, p);
      CHECK(r.spread < 1e-8 * std::max(1.0, r.mean));
      CHECK(r.mean > 0.0);
    }
  }
}

TEST_CASE("curvature at the origin") {
  const auto r1 = curvature_fd(standard_bundle(1), origin(1));
  CHECK(r1(0, 0, 0, 0).real() <= -2.0 + 1e-3);
  for (int n = 2; n <= 3; ++n) {
    const auto r = curvature_fd(standard_bundle(n), origin(n));
    CHECK(r.symmetry_residual() < 1e-6);
  }
}

TEST_CASE("finite-difference curvature agrees with the three-term formula") {
  for (int n = 1; n <= 2; ++n) CHECK(curvature_formula_check(standard_bundle(n), origin(n)) < 1e-4);
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 3; ++i) {
      const auto b = random_bundle(n, rng);
      CHECK(curvature_formula_check(b, random_point(n, rng, 0.6)) < 1e-4);
    }
  CHECK_THROWS_AS(curvature_formula(standard_bundle(2, 2), origin(2)), CaseNotCoveredError);
}

TEST_CASE("the projection term is a nonpositive correction") {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 3; ++n) {
    const auto b = random_bundle(n, rng);
    const auto p = random_point(n, rng, 0.5);
    const auto terms = curvature_formula(b, p);
    const auto full = curvature_fd(b, p);
    const int d = full.dim();
    std::normal_distribution<double> nd;
    for (int i = 0; i < 5; ++i) {
      CVec xi(d);
      for (int a = 0; a < d; ++a) xi(a) = cd(nd(rng), nd(rng));
      CHECK(terms.projection.contract(xi, xi, xi, xi).real() <= 1e-12);
      CHECK(full.contract(xi, xi, xi, xi).real() <= terms.quartic.contract(xi, xi, xi, xi).real() + 1e-6);
    }
  }
}

TEST_CASE("Burns bounds on a small sweep") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n) {
    const auto rep = burns_bounds(random_bundle(n, rng), 5, 100 + n);
    CHECK(rep.max_holomorphic <= -2.0 / n + 1e-3);
    CHECK(rep.max_bisectional <= 1e-6);
    CHECK(rep.max_bisectional_gap <= 1e-6);
    CHECK(rep.max_ricci <= -2.0 / n + 1e-3);
    CHECK(rep.max_symmetry < 1e-6);
  }
  CHECK_THROWS_AS(burns_bounds(standard_bundle(1), 0, 1), ConfigError);
}

TEST_CASE("bisectional curvature is nonpositive for orthogonal directions") {
  const auto r = curvature_fd(standard_bundle(2), origin(2));
  CVec xi = CVec::Zero(3), eta = CVec::Zero(3);
  xi(0) = 1.0;
  eta(2) = 1.0;
  CHECK(r.contract(xi, xi, eta, eta).real() <= 1e-6);
}

TEST_CASE("trace inequality") {
  for (int n = 1; n <= 6; ++n) {
    const auto t = trace_inequality(CMat::Identity(n, n));
    CHECK(t.lhs == doctest::Approx(double(n)));
    CHECK(t.rhs == doctest::Approx(double(n)));
  }
  CMat e = CMat::Zero(2, 2);
  e(0, 0) = 1.0;
  const auto t = trace_inequality(e);
  CHECK(t.lhs == 1.0);
  CHECK(t.rhs == 0.5);

  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < 50; ++i) {
      CMat k(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) k(a, b) = cd(nd(rng), nd(rng));
      const auto r = trace_inequality(k);
      // Eigenvalue oracle: lhs = sum s^4, rhs = (sum s^2)^2 / n.
      const Eigen::VectorXd s = Eigen::JacobiSVD<CMat>(k).singularValues();
      CHECK(r.lhs == doctest::Approx(s.array().pow(4).sum()).epsilon(1e-10));
      CHECK(r.lhs >= r.rhs);
    }
}
