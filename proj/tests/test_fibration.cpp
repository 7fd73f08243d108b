#include <doctest.h>

#include <numbers>
#include <random>

#include "pklab/models.hpp"

using namespace pklab;

namespace {

CVec one(cd z) {
  CVec v(1);
  v << z;
  return v;
}

// Trigonometric polynomial in the lattice coordinates of C/<1, t> with seeded
// coefficients on modes |k| <= 3.
CVec fiber_function(const FiberState& s, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const cd t = s.t(0);
  std::vector<std::tuple<int, int, cd>> modes;
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q) modes.emplace_back(p, q, cd(nd(rng), nd(rng)) / (1.0 + p * p + q * q));
  CVec f(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) {
    const Vec x = s.grid.point(i);
    const double v = x(1) / t.imag();
    const double u = x(0) - v * t.real();
    f(i) = 0.0;
    for (auto [p, q, c] : modes) f(i) += c * std::exp(cd(0.0, 2.0 * std::numbers::pi * (p * u + q * v)));
  }
  return f;
}

}  // namespace

TEST_CASE("elliptic potential reproduces the pulled-back flat form") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(0.3, 3.0);
  const auto model = elliptic_model();
  for (int i = 0; i < 50; ++i) {
    const cd t(re(rng), im(rng));
    const cd z(re(rng), re(rng));
    const double s = t.imag(), y = z.imag();
    const auto g = point_geometry(model, one(t), one(z));
    const auto slice = elliptic_family(t);
    CHECK(max_abs(g.hessian - slice.pullback(z)) < 1e-12);
    CHECK(std::abs(slice.pullback_20(z)) < 1e-14);
    CHECK(std::abs(slice.map(1.0) - 1.0) < 1e-14);
    CHECK(std::abs(slice.map(t) - kI) < 1e-14);
    CHECK(std::abs(g.fiber(0, 0) - 1.0 / s) < 1e-13);
    CHECK(std::abs(g.hessian(0, 1) + y / (s * s)) < 1e-13);
    CHECK(std::abs(g.hessian(0, 0) - y * y / (s * s * s)) < 1e-12);
    CHECK(std::abs(g.hessian.determinant()) < 1e-12);
    CHECK(max_abs(g.c) < 1e-12);
    CHECK(std::abs(ks_pairing(g, 0, 0) - 1.0 / (4.0 * s * s)) < 1e-12);
  }
}

TEST_CASE("elliptic WP metric scales as (Im t)^-2") {
  const auto model = elliptic_model(16);
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    const CMat wp = wp_fiber_metric(model, one(cd(0.2, s)));
    CHECK(std::abs(wp(0, 0) * s * s - 0.5) < 1e-12);
  }
  const FiberState st = fiber_state(model, one(cd(0.2, 1.0)));
  CHECK(ks_closedness(st) == 0.0);  // one fiber dimension: nothing to check
}

TEST_CASE("Schumacher identity") {
  SUBCASE("elliptic") {
    const auto r = schumacher_residual(elliptic_model(64), one(cd(-0.4, 0.9)), 0, 0);
    CHECK(r.residual < 1e-8);
    CHECK(max_abs(r.box_c) < 1e-10);
  }
  SUBCASE("perturbed torus") {
    const auto r = schumacher_residual(perturbed_torus_model(0.02, 64), one(cd(0.3, 1.2)), 0, 0);
    CHECK(r.residual < 1e-8);
    CHECK(max_abs(r.box_c) > 1.0);  // the geodesic curvature term is active
  }
  SUBCASE("coarse grid is refused") {
    CHECK_THROWS_AS(schumacher_residual(perturbed_torus_model(0.02, 32), one(cd(0.3, 1.2)), 0, 0), ResolutionError);
  }
  SUBCASE("non-compact fibers are refused") {
    CHECK_THROWS_AS(fiber_state(quartic_perturbation_model(), one(0.0)), PropernessError);
  }
}

TEST_CASE("fiber integral formula for the WP metric") {
  const auto flat = fujiki_schumacher(fiber_state(elliptic_model(16), one(cd(0.1, 1.5))));
  CHECK(flat.residual() < 1e-12);
  CHECK(std::abs(flat.scalar_term) < 1e-14);
  const auto bumpy = fujiki_schumacher(fiber_state(perturbed_torus_model(0.02, 64), one(cd(0.3, 1.2))));
  CHECK(bumpy.residual() < 1e-10);
  CHECK(std::abs(bumpy.scalar_term) > 1e-3);
}

TEST_CASE("Bochner identity on flat fibers") {
  std::mt19937_64 rng(11);
  const FiberState st = fiber_state(elliptic_model(64), one(cd(0.25, 1.3)));
  for (int i = 0; i < 10; ++i) {
    const auto r = bkn_identity_check(st, fiber_function(st, rng));
    CHECK(r.kappa_norm > 0.1);
    CHECK(std::abs(r.kappa_norm - r.box_norm) < 1e-10);
  }
  const FiberState bumpy = fiber_state(perturbed_torus_model(0.02, 64), one(cd(0.3, 1.2)));
  CHECK_THROWS_AS(bkn_identity_check(bumpy, CVec::Zero(bumpy.grid.size())), CaseNotCoveredError);
}

TEST_CASE("Poisson-Kahler criteria agree") {
  CMat a0(2, 2), a1(2, 2);
  a0 << 2.0, cd(0.3, 0.1), cd(0.3, -0.1), 1.0;
  a1 << 1.0, cd(-0.2, 0.4), cd(-0.2, -0.4), 3.0;
  const std::vector<std::pair<FibrationModel, bool>> suite = {
      {product_model(), true},
      {holomorphic_shift_model(), true},
      {hermitian_geodesic_model(a0, a1), true},
      {product_model(1.0), false},
      {quartic_perturbation_model(), false},
      {hermitian_linear_model(a0, a1), false},
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const double tol = 1e-10;
  for (const auto& [model, pk] : suite) {
    CAPTURE(model.name);
    std::vector<CVec> ts, zetas;
    for (int i = 0; i < 10; ++i) {
      ts.push_back(one(cd(u(rng), u(rng))));
      CVec z(model.n);
      for (int a = 0; a < model.n; ++a) z(a) = cd(u(rng), u(rng));
      zetas.push_back(z);
    }
    const auto r = pk_residual(model, ts, zetas);
    CHECK((r.omega_power <= tol) == pk);
    CHECK((r.c_sup <= tol) == pk);
  }
}

TEST_CASE("brackets of horizontal lifts") {
  const auto torus = perturbed_torus_model(0.02);
  const auto b = bracket_check(torus, one(cd(0.3, 1.2)), one(cd(0.2, 0.4)));
  CHECK(b.holomorphic < 1e-12);
  CHECK(b.contraction < 1e-10);
  CHECK(b.fiber_dc > 1e-3);

  CVec t(2);
  t << cd(0.1, 0.2), cd(-0.3, 0.1);
  const auto flat = bracket_check(fiber_constant_model(), t, one(cd(0.4, -0.2)));
  CHECK(flat.holomorphic < 1e-12);
  CHECK(flat.contraction < 1e-12);
  CHECK(flat.fiber_dc < 1e-12);
}

TEST_CASE("closedness of the vertical-horizontal form") {
  Vec x(6);
  x << 0.1, 0.2, -0.3, 0.1, 0.4, -0.2;
  CHECK(d_omega_prime(fiber_constant_model(), x) < 1e-8);
  Vec y(4);
  y << 0.1, 0.2, -0.3, 0.4;
  CHECK(d_omega_prime(quartic_perturbation_model(), y) > 1e-3);
}
