#include <doctest.h>

#include <random>

#include "pklab/projbundle.hpp"

using namespace pklab;

namespace {

CMat random_pd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = cd(nd(rng), nd(rng));
  return b * b.adjoint() / n + 0.3 * CMat::Identity(n, n);
}

CVec random_point(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CVec z(n);
  for (int i = 0; i < n; ++i) z(i) = cd(u(rng), u(rng));
  return z;
}

}  // namespace

TEST_CASE("flat bundle gives Fubini-Study on the fiber and nothing on the base") {
  const auto model = flat_bundle(2);
  CVec t(1), w(1);
  t << cd(0.2, -0.1);
  w << cd(0.3, 0.4);
  const CMat m = pk_form(model, t, w);
  CHECK(std::abs(m(1, 1) - 1.0 / (1.25 * 1.25)) < 1e-15);
  CHECK(std::abs(m(0, 0)) < 1e-15);
  CHECK(std::abs(m(0, 1)) < 1e-15);
}

TEST_CASE("projective flatness residual") {
  std::mt19937_64 rng(1);
  for (int r : {2, 3}) {
    const auto twisted = twisted_bundle(random_pd(r, rng));
    for (int i = 0; i < 5; ++i) CHECK(projective_flatness_residual(twisted, random_point(1, rng, 0.8)) < 1e-12);
  }
  CVec half(1);
  half << 0.5;
  CHECK(projective_flatness_residual(split_bundle({1.0, 2.0}), half) > 0.1);
  CHECK(projective_flatness_residual(line_bundle(), half) < 1e-15);
  // Twist by lambda gives curvature ddbar lambda times the identity.
  const BundleCurvature c = bundle_curvature(twisted_bundle(CMat::Identity(2, 2)), half);
  const double lam = 1.0 + 0.3 * 4.0 * 0.25;  // ddbar (s + 0.3 s^2), s = |t|^2
  CHECK(std::abs(c.ric(0, 0) - 2.0 * lam) < 1e-12);
}

TEST_CASE("projectively flat bundles give Poisson-Kahler forms") {
  std::mt19937_64 rng(2);
  for (int r : {2, 3}) {
    for (int m : {1, 2}) {
      auto model = twisted_bundle(random_pd(r, rng), m);
      for (int i = 0; i < 100; ++i) {
        model.chart = i % r;
        const CVec t = random_point(m, rng, 0.7), w = random_point(r - 1, rng, 1.5);
        const CMat form = pk_form(model, t, w);
        CHECK(max_abs(CMat(form - pk_form_direct(model, t, w))) < 1e-10);
        CHECK(top_power(form, r) < 1e-10);
        CHECK(Eigen::SelfAdjointEigenSolver<CMat>(form.bottomRightCorner(r - 1, r - 1)).eigenvalues().minCoeff() > 0.0);
      }
    }
  }
}

TEST_CASE("split bundles with distinct twists are not Poisson-Kahler") {
  CVec t(1), w1(1), w2(2);
  t << 0.5;
  w1 << 1.0;
  w2 << 1.0, 1.0;
  const auto split2 = split_bundle({1.0, 2.0});
  CHECK(top_power(pk_form(split2, t, w1), 2) > 1e-3);
  const auto split3 = split_bundle({1.0, 2.0, 3.0});
  CHECK(top_power(pk_form(split3, t, w2), 3) > 1e-3);
  CHECK(max_abs(CMat(pk_form(split3, t, w2) - pk_form_direct(split3, t, w2))) < 1e-10);
}

TEST_CASE("fiber restriction is Fubini-Study") {
  std::mt19937_64 rng(3);
  std::vector<CVec> ws2, ws3;
  for (int i = 0; i < 20; ++i) {
    ws2.push_back(random_point(1, rng, 2.0));
    ws3.push_back(random_point(2, rng, 2.0));
  }
  CVec t(1);
  t << 0.3;
  CHECK(fiber_fs_check(flat_bundle(2), t, ws2) < 1e-15);
  CHECK(fiber_fs_check(twisted_bundle(random_pd(2, rng)), t, ws2) < 1e-10);
  auto constant = twisted_bundle(random_pd(3, rng));
  for (int chart = 0; chart < 3; ++chart) {
    constant.chart = chart;
    CHECK(fiber_fs_check(constant, t, ws3) < 1e-10);
  }
}

TEST_CASE("the form is closed") {
  std::mt19937_64 rng(4);
  const std::vector<BundleMetricModel> models = {twisted_bundle(random_pd(2, rng)), twisted_bundle(random_pd(3, rng)),
                                                 split_bundle({1.0, 2.0}), split_bundle({1.0, 2.0, 3.0})};
  for (const auto& model : models) {
    const CVec t = random_point(1, rng, 0.5), w = random_point(model.r - 1, rng, 1.0);
    CHECK(pk_form_closedness(model, t, w) < 1e-6);
  }
}

TEST_CASE("rank one is always projectively flat") {
  CVec t(1);
  t << cd(0.4, 0.2);
  const CMat form = pk_form(line_bundle(), t, CVec(0));
  CHECK(form.rows() == 1);
  CHECK(top_power(form, 1) < 1e-12);
}

TEST_CASE("errors") {
  CVec t(1), w(1);
  t << 0.0;
  w << 0.0;
  auto model = flat_bundle(2);
  model.chart = 2;
  CHECK_THROWS_AS(pk_form(model, t, w), DomainError);
  CMat bad = -CMat::Identity(2, 2);
  CHECK_THROWS_AS(twisted_bundle(bad), PositivityError);
}
