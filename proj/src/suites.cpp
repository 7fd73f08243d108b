#include "pklab/suites.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "pklab/geodesics.hpp"
#include "pklab/legendre.hpp"
#include "pklab/models.hpp"
#include "pklab/projbundle.hpp"
#include "pklab/wpcurv.hpp"

namespace pklab {

namespace {

using nlohmann::json;
using Rng = std::mt19937_64;

constexpr auto kAtMost = Relation::at_most;
constexpr auto kAtLeast = Relation::at_least;

std::string tag(const std::string& base, const char* key, int v) { return base + "[" + key + "=" + std::to_string(v) + "]"; }

std::vector<int> sweep(const SuiteConfig& c, std::vector<int> defaults) {
  return c.n ? std::vector<int>{*c.n} : defaults;
}

int samples_or(const SuiteConfig& c, int fallback) { return c.samples.value_or(fallback); }

Rng suite_rng(const SuiteConfig& c, const std::string& suite) {
  // Different suites draw independent streams from the same seed.
  std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                    static_cast<std::uint32_t>(std::hash<std::string>{}(suite) & 0xffffffffu)};
  return Rng(seq);
}

CMat random_symmetric(int n, Rng& rng, double radius) {
  std::normal_distribution<double> nd;
  CMat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m(a, b) = m(b, a) = cd(nd(rng), nd(rng));
  return m * (radius / Eigen::JacobiSVD<CMat>(m).singularValues()(0));
}

CMat random_complex(int r, int c, Rng& rng) {
  std::normal_distribution<double> nd;
  CMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cd(nd(rng), nd(rng));
  return m;
}

CMat random_pd(int n, Rng& rng) {
  const CMat x = random_complex(n, n, rng);
  return x * x.adjoint() / n + 0.2 * CMat::Identity(n, n);
}

Mat random_spd(int n, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat b(n, n);
  for (double& v : b.reshaped()) v = nd(rng);
  return b * b.transpose() / n + 0.2 * Mat::Identity(n, n);
}

CVec one(cd z) {
  CVec v(1);
  v << z;
  return v;
}

HiggsBundle random_bundle(int n, int k, Rng& rng) {
  const auto s = standard_symplectic(n);
  const auto j = random_compatible(n, rng);
  return HiggsBundle{s, j, adapted_frame(s, j), k};
}

// Suites.

void kns_roundtrip(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "kns-roundtrip");
  const int samples = samples_or(c, 100);
  for (int n : sweep(c, {1, 2, 3, 4})) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const auto f = adapted_frame(s, j);
    double roundtrip = 0.0, point_roundtrip = 0.0, cayley = 0.0, symmetry = 0.0, rho = 0.0;
    json worst;
    for (int i = 0; i < samples; ++i) {
      const auto jp = random_compatible(n, rng);
      const BsdPoint p = kns_tensor(j, jp, f);
      const double err = max_abs(CMat(structure_from_bsd(j, f, p).matrix() - jp.matrix()).real());
      if (err > roundtrip) worst = {{"J", matrix_json(j.matrix())}, {"J_prime", matrix_json(jp.matrix())}};
      roundtrip = std::max(roundtrip, err);
      cayley = std::max(cayley, max_abs(CMat(p.phi - kns_tensor_by_projection(j, jp, f))));
      symmetry = std::max(symmetry, max_abs(CMat(p.phi - p.phi.transpose())));
      rho = std::max(rho, Eigen::ComplexEigenSolver<CMat>(p.phi * p.phi.conjugate()).eigenvalues().cwiseAbs().maxCoeff());
      const BsdPoint q = make_bsd_point(random_symmetric(n, rng, 0.9));
      point_roundtrip = std::max(point_roundtrip, max_abs(CMat(kns_tensor(j, structure_from_bsd(j, f, q), f).phi - q.phi)));
    }
    rec.check(tag("kns.roundtrip", "n", n), "KNS chart is bijective", std::max(roundtrip, point_roundtrip), kAtMost, 1e-10,
              worst);
    rec.check(tag("kns.cayley-vs-projection", "n", n), "KNS chart: Cayley formula", cayley, kAtMost, 1e-10, worst);
    rec.check(tag("bsd.symmetry", "n", n), "Siegel domain membership", symmetry, kAtMost, 1e-10, worst);
    rec.check(tag("bsd.spectral-radius", "n", n), "Siegel domain membership", rho, kAtMost, std::nextafter(1.0, 0.0), worst);
  }
}

void higgs_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "higgs");
  const int samples = samples_or(c, 3);
  for (int n : sweep(c, {1, 2})) {
    for (int k = 0; k <= std::min(2, 2 * n); ++k) {
      double alg = 0.0, adjoint = 0.0, split = 0.0, metric = 0.0, holo = 0.0, curv = 0.0, flat = 0.0;
      for (int i = 0; i < samples; ++i) {
        const auto b = random_bundle(n, k, rng);
        const BsdPoint p = make_bsd_point(random_symmetric(n, rng, 0.5));
        const auto a = algebraic_check(higgs_frame(b, p));
        alg = std::max({alg, a.partition, a.theta_type, a.theta_square});
        adjoint = std::max(adjoint, a.adjoint);
        split = std::max(split, connection_split_check(b, p));
        metric = std::max(metric, metric_compatibility_check(b, p));
        holo = std::max(holo, theta_holomorphicity_check(b, p));
        curv = std::max(curv, curvature_identity_check(b, p));
        flat = std::max(flat, flatness_check(b, p).max());
      }
      const std::string nk = "[n=" + std::to_string(n) + ",k=" + std::to_string(k) + "]";
      rec.check("higgs.theta-squared" + nk, "Higgs field: theta^2 = 0", alg, kAtMost, 1e-10);
      rec.check("higgs.adjoint" + nk, "Higgs field: theta^* = conj(theta)", adjoint, kAtMost, 1e-10);
      rec.check("higgs.connection-split" + nk, "flat connection splits as D + theta + conj(theta)", split, kAtMost, 1e-5);
      rec.check("higgs.metric-compatibility" + nk, "D is the Chern connection", metric, kAtMost, 1e-5);
      rec.check("higgs.theta-holomorphic" + nk, "Higgs field is holomorphic", holo, kAtMost, 1e-5);
      rec.check("higgs.curvature-identity" + nk, "Higgs curvature identity", curv, kAtMost, 1e-5);
      rec.check("higgs.plaquette-flatness" + nk, "flat Higgs bundle", flat, kAtMost, 1e-5);
    }
  }
}

void burns_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "burns-bounds");
  const int samples = samples_or(c, 100);
  Profile prof{"hsc-vs-radius", {"n", "radius", "holomorphic_sectional", "ricci"}, {}};
  for (int n : sweep(c, {1, 2, 3})) {
    const auto b = random_bundle(n, 1, rng);
    const auto r = burns_bounds(b, samples, rng());
    auto witness = [&](auto key) {
      const auto it = std::max_element(r.trace.begin(), r.trace.end(),
                                       [&](const BurnsSample& x, const BurnsSample& y) { return key(x) < key(y); });
      return json{{"J", matrix_json(b.j.matrix())}, {"phi", matrix_json(it->phi)}};
    };
    const double bound = -2.0 / n;
    rec.check(tag("burns.holomorphic-sectional", "n", n), "Burns bound on holomorphic sectional curvature", r.max_holomorphic,
              kAtMost, bound + 1e-3, witness([](const BurnsSample& s) { return s.holomorphic; }));
    rec.check(tag("burns.bisectional", "n", n), "nonpositive bisectional curvature", r.max_bisectional, kAtMost, 1e-6,
              witness([](const BurnsSample& s) { return s.bisectional; }));
    rec.check(tag("burns.ricci", "n", n), "Burns bound on Ricci curvature", r.max_ricci, kAtMost, bound + 1e-3,
              witness([](const BurnsSample& s) { return s.ricci; }));
    for (const auto& s : r.trace) prof.rows.push_back({double(n), s.radius, s.holomorphic, s.ricci});
  }
  rec.profile(std::move(prof));
}

void curvature_formula_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "curvature-formula");
  const int samples = samples_or(c, 20);
  for (int n : sweep(c, {1, 2})) {
    double worst = 0.0;
    json w;
    for (int i = 0; i < samples; ++i) {
      const auto b = random_bundle(n, 1, rng);
      const BsdPoint p = make_bsd_point(random_symmetric(n, rng, 0.6));
      const double e = curvature_formula_check(b, p);
      if (e > worst) w = {{"J", matrix_json(b.j.matrix())}, {"phi", matrix_json(p.phi)}};
      worst = std::max(worst, e);
    }
    rec.check(tag("curvature.fd-vs-formula", "n", n), "explicit curvature formula", worst, kAtMost, 1e-4, w);
  }
}

void trace_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "trace-inequality");
  const int samples = samples_or(c, 1000);
  std::uniform_real_distribution<double> ud(0.1, 2.0);
  for (int n : sweep(c, {1, 2, 3, 4, 5, 6})) {
    double gap = std::numeric_limits<double>::infinity();
    int mismatches = 0, scalar_cases = 0;
    json w;
    for (int i = 0; i < samples; ++i) {
      CMat k = random_complex(n, n, rng);
      // Every fourth sample is a multiple of a unitary, so k^* k is scalar.
      if (i % 4 == 3) k = cd(ud(rng), ud(rng)) * CMat(Eigen::HouseholderQR<CMat>(k).householderQ());
      const TracePair t = trace_inequality(k);
      const CMat kk = k.adjoint() * k;
      const bool scalar = max_abs(CMat(kk - kk.trace() / double(n) * CMat::Identity(n, n))) <= 1e-12 * max_abs(kk);
      const bool equal = std::abs(t.lhs - t.rhs) <= 1e-12 * t.lhs;
      scalar_cases += scalar;
      if (scalar != equal) {
        ++mismatches;
        w = {{"kappa", matrix_json(k)}};
      }
      const double rel = (t.lhs - t.rhs) / t.lhs;
      if (rel < gap && rel < -1e-12) w = {{"kappa", matrix_json(k)}};
      gap = std::min(gap, rel);
    }
    rec.check(tag("trace.inequality", "n", n), "pointwise trace inequality", gap, kAtLeast, -1e-12, w);
    rec.check(tag("trace.equality-iff-scalar", "n", n), "pointwise trace inequality: equality case", mismatches, kAtMost, 0, w);
    rec.require(tag("trace.scalar-cases-present", "n", n), "plumbing", scalar_cases > 0);
  }
}

// Lattice-periodic trigonometric polynomial on C/<1, t>.
CVec fiber_function(const FiberState& s, Rng& rng) {
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
    for (auto [p, q, a] : modes) f(i) += a * std::exp(cd(0.0, 2.0 * std::numbers::pi * (p * u + q * v)));
  }
  return f;
}

void elliptic_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "elliptic");
  const int samples = samples_or(c, 100);
  const auto model = elliptic_model(c.grid);
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(0.3, 3.0);
  double wedge = 0.0, csup = 0.0, pull = 0.0;
  for (int i = 0; i < samples; ++i) {
    const cd t(re(rng), im(rng)), z(re(rng), re(rng));
    const auto g = point_geometry(model, one(t), one(z));
    wedge = std::max(wedge, std::abs(g.hessian.determinant()));
    csup = std::max(csup, max_abs(g.c));
    pull = std::max(pull, max_abs(CMat(g.hessian - elliptic_family(t).pullback(z))));
  }
  rec.check("elliptic.omega-squared", "elliptic family is Poisson-Kahler", wedge, kAtMost, 1e-12);
  rec.check("elliptic.geodesic-curvature", "elliptic family is Poisson-Kahler", csup, kAtMost, 1e-12);
  rec.check("elliptic.pullback", "elliptic family: flat form pulled back", pull, kAtMost, 1e-12);

  Profile prof{"wp-vs-imt", {"im_t", "G"}, {}};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    const double g = wp_fiber_metric(model, one(cd(0.2, s)))(0, 0).real();
    prof.rows.push_back({s, g});
    lo = std::min(lo, g * s * s);
    hi = std::max(hi, g * s * s);
  }
  rec.check("elliptic.wp-scaling", "elliptic family: WP metric scales as (Im t)^-2", (hi - lo) / hi, kAtMost, 1e-8);
  rec.measure("elliptic.wp-constant", hi, "G(t) (Im t)^2");
  rec.profile(std::move(prof));

  const auto sch = schumacher_residual(model, one(cd(-0.4, 0.9)), 0, 0);
  rec.check("elliptic.schumacher", "Schumacher identity", sch.residual, kAtMost, 1e-8);

  const FiberState st = fiber_state(model, one(cd(0.25, 1.3)));
  double bochner = 0.0, smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10; ++i) {
    const auto r = bkn_identity_check(st, fiber_function(st, rng));
    bochner = std::max(bochner, std::abs(r.kappa_norm - r.box_norm));
    smallest = std::min(smallest, r.kappa_norm);
  }
  rec.check("elliptic.bochner", "Bochner identity on flat fibers", bochner, kAtMost, 1e-10);
  rec.check("elliptic.bochner-nontrivial", "plumbing", smallest, kAtLeast, 1e-3);
}

const cd kSchumacherBase(0.3, 1.2);

// Family for the Schumacher suite: perturbed-torus (param eps) or elliptic.
FibrationModel schumacher_model(const SuiteConfig& c) {
  const std::string family = c.model.empty() ? "perturbed-torus" : c.model;
  for (const auto& [k, v] : c.model_params)
    if (family != "perturbed-torus" || k != "eps") throw ConfigError("model '" + family + "' has no parameter '" + k + "'");
  if (family == "elliptic") return elliptic_model(c.grid);
  if (family != "perturbed-torus") throw ConfigError("schumacher: unknown model family '" + family + "'");
  const double eps = c.model_params.count("eps") ? c.model_params.at("eps") : 0.02;
  // Fiber metric is 1/(2s) - eps pi^2 (s^2 + (Re t)^2) cos(2 pi u) / s at t = Re t + i s.
  const cd t = kSchumacherBase;
  const double bound = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi * std::norm(t));
  if (!(std::abs(eps) < bound))
    throw ConfigError("perturbed-torus: |eps| must be below " + std::to_string(bound) + " for a positive fiber metric");
  return perturbed_torus_model(eps, c.grid);
}

void schumacher_suite(const SuiteConfig& c, Recorder& rec) {
  const auto torus = schumacher_model(c);
  const CVec t = one(kSchumacherBase);
  const FiberState st = fiber_state(torus, t);
  const auto sch = schumacher_residual(st, 0, 0);
  rec.check("schumacher.residual", "Schumacher identity", sch.residual, kAtMost, 1e-8);
  if (torus.name != "elliptic") rec.check("schumacher.box-term-active", "plumbing", max_abs(sch.box_c), kAtLeast, 1e-2);
  const auto fs = fujiki_schumacher(st);
  rec.check("schumacher.fiber-integral", "WP metric as a fiber integral", fs.residual(), kAtMost, 1e-10);
  rec.measure("schumacher.wp", fs.wp.real());
  try {
    schumacher_residual(perturbed_torus_model(0.02, 16), t, 0, 0);
    rec.require("schumacher.resolution-guard", "plumbing", false);
  } catch (const ResolutionError&) {
    rec.require("schumacher.resolution-guard", "plumbing", true);
  }
}

void pk_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "pk-equivalence");
  const int samples = samples_or(c, 10);
  const CMat a0 = random_pd(2, rng), a1 = random_pd(2, rng);
  const std::vector<std::pair<FibrationModel, bool>> suite = {
      {product_model(), true},         {holomorphic_shift_model(), true},    {hermitian_geodesic_model(a0, a1), true},
      {product_model(1.0), false},     {quartic_perturbation_model(), false}, {hermitian_linear_model(a0, a1), false},
  };
  // Re t is the path parameter of the Hermitian models; keep it inside (0, 1).
  std::uniform_real_distribution<double> u(-0.5, 0.5), s(0.1, 0.9);
  const double tol = 1e-10;
  int pk_count = 0, non_pk_count = 0;
  for (const auto& [model, expected] : suite) {
    std::vector<CVec> ts, zs;
    for (int i = 0; i < samples; ++i) {
      ts.push_back(one(cd(s(rng), u(rng))));
      CVec z(model.n);
      for (int a = 0; a < model.n; ++a) z(a) = cd(u(rng), u(rng));
      zs.push_back(z);
    }
    const auto r = pk_residual(model, ts, zs);
    const bool by_power = r.omega_power <= tol, by_c = r.c_sup <= tol;
    rec.require("pk.equivalence[" + model.name + "]", "Poisson-Kahler criteria agree", by_power == by_c,
                json{{"omega_power", r.omega_power}, {"c_sup", r.c_sup}});
    rec.require("pk.expected[" + model.name + "]", "plumbing", by_power == expected);
    (by_power ? pk_count : non_pk_count) += 1;
  }
  rec.require("pk.both-directions", "plumbing", pk_count == 3 && non_pk_count == 3);

  const auto torus = bracket_check(perturbed_torus_model(0.02), one(cd(0.3, 1.2)), one(cd(0.2, 0.4)));
  CVec t2(2);
  t2 << cd(0.1, 0.2), cd(-0.3, 0.1);
  const auto flat = bracket_check(fiber_constant_model(), t2, one(cd(0.4, -0.2)));
  rec.check("pk.lift-bracket-contraction", "brackets of horizontal lifts", std::max(torus.contraction, flat.contraction),
            kAtMost, 1e-10);
  rec.check("pk.lift-bracket-holomorphic", "brackets of horizontal lifts", std::max(torus.holomorphic, flat.holomorphic),
            kAtMost, 1e-12);
  Vec x(6);
  x << 0.1, 0.2, -0.3, 0.1, 0.4, -0.2;
  Vec y(4);
  y << 0.1, 0.2, -0.3, 0.4;
  rec.check("pk.omega-prime-closed", "closedness of the horizontal-vertical form", d_omega_prime(fiber_constant_model(), x),
            kAtMost, 1e-8);
  rec.check("pk.omega-prime-control", "plumbing", d_omega_prime(quartic_perturbation_model(), y), kAtLeast, 1e-3);
}

void geodesics_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "geodesics");
  const int samples = samples_or(c, 50);
  const std::vector<int> ns = sweep(c, {1, 2, 3, 4, 5});
  double theta = 0.0;
  bool endpoints = true;
  json w;
  for (int i = 0; i < samples; ++i) {
    const int n = ns[i % ns.size()];
    const CMat a0 = random_pd(n, rng), a1 = random_pd(n, rng);
    endpoints = endpoints && hermitian_geodesic(a0, a1, 0.0) == a0 && hermitian_geodesic(a0, a1, 1.0) == a1;
    const auto path = geodesic_path(a0, a1);
    for (int k = 0; k <= 10; ++k) {
      const double e = max_abs(theta_tt(path, k / 10.0));
      if (e > theta) w = {{"A0", matrix_json(a0)}, {"A1", matrix_json(a1)}, {"t", k / 10.0}};
      theta = std::max(theta, e);
    }
  }
  rec.check("geodesics.theta-tt", "Hermitian geodesic equation", theta, kAtMost, 1e-8, w);
  rec.require("geodesics.endpoints", "Hermitian geodesic equation", endpoints);

  // Degeneracy of the potential Hessian against theta_tt, and under the complex transform.
  const double tol = 1e-10;
  int mismatch = 0, dual_mismatch = 0, degenerate = 0, nondegenerate = 0;
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    const int n = ns[i % ns.size()];
    const CMat a0 = random_pd(n, rng), a1 = random_pd(n, rng);
    for (const HermitianPath& path : {geodesic_path(a0, a1), linear_path(a0, a1)}) {
      const HermitianPath dual = complex_legendre(path);
      const double t = 0.2 + 0.03 * i;
      const CVec z = random_complex(n, 1, rng);
      const bool by_det = std::abs(ma_determinant(hermitian_potential_hessian(path(t), z))) <= tol;
      const bool by_theta = max_abs(theta_tt(path, t)) <= tol;
      const bool dual_det = std::abs(ma_determinant(hermitian_potential_hessian(dual(t), z))) <= tol;
      mismatch += by_det != by_theta;
      dual_mismatch += by_det != dual_det;
      (by_det ? degenerate : nondegenerate) += 1;
    }
  }
  rec.check("geodesics.ma-iff-theta", "Monge-Ampere degeneracy characterizes geodesics", mismatch, kAtMost, 0);
  rec.check("geodesics.legendre-duality", "complex Legendre transform preserves degeneracy", dual_mismatch, kAtMost, 0);
  rec.require("geodesics.both-truth-values", "plumbing", degenerate > 0 && nondegenerate > 0);

  double involution = 0.0;
  for (int i = 0; i < 20; ++i) {
    const CMat a = random_pd(1 + i % 4, rng);
    involution = std::max(involution, max_abs(CMat(complex_legendre(complex_legendre(a)) - a)) / max_abs(a));
  }
  rec.check("geodesics.complex-legendre-involution", "complex Legendre transform preserves degeneracy", involution, kAtMost,
            1e-12);

  const auto sq = ConvexGrid::sample(-5.0, 5.0, 512, [](double x) { return x * x; });
  const auto dual = real_legendre(sq);
  double conj_err = 0.0;
  for (int i = 0; i < dual.size(); ++i) conj_err = std::max(conj_err, std::abs(dual.values(i) - dual.node(i) * dual.node(i) / 4.0));
  rec.check("geodesics.real-legendre", "real Legendre transform", conj_err, kAtMost, 2e-3);

  const auto p0 = sq;
  const auto p1 = ConvexGrid::sample(-5.0, 5.0, 512, [](double x) { return 4.0 * x * x; });
  const double h = 0.1;
  const Vec ys = Vec::LinSpaced(41, -4.0, 4.0);
  const double grid_tol = p0.step() * p0.step() / (h * h);
  const double geo = dual_second_difference(convex_geodesic(p0, p1, 0.5 - h), convex_geodesic(p0, p1, 0.5),
                                            convex_geodesic(p0, p1, 0.5 + h), h, ys);
  auto blend = [&](double t) { return ConvexGrid{p0.lo, p0.hi, (1.0 - t) * p0.values + t * p1.values}; };
  const double lin = dual_second_difference(blend(0.5 - h), blend(0.5), blend(0.5 + h), h, ys);
  rec.check("geodesics.dual-linearity", "convex geodesics are dual-linear", geo, kAtMost, grid_tol);
  rec.check("geodesics.dual-linearity-control", "convex geodesics are dual-linear", lin / geo, kAtLeast, 10.0);

  Profile prof{"ma-refinement", {"h", "geodesic_residual", "linear_residual"}, {}};
  double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0, prev = 0.0;
  for (double step : {0.04, 0.02, 0.01, 0.005}) {
    const double r = std::abs(discrete_ma([](double t, double x) { return quadratic_geodesic(1.0, 4.0, t, x); }, 0.5, 1.0, step));
    const double l = std::abs(discrete_ma([](double t, double x) { return (1.0 + 3.0 * t) * x * x; }, 0.5, 1.0, step));
    prof.rows.push_back({step, r, l});
    if (prev > 0.0) {
      min_ratio = std::min(min_ratio, prev / r);
      max_ratio = std::max(max_ratio, prev / r);
    }
    prev = r;
  }
  rec.check("geodesics.ma-order-min", "discrete Monge-Ampere residual is second order", min_ratio, kAtLeast, 3.5);
  rec.check("geodesics.ma-order-max", "discrete Monge-Ampere residual is second order", max_ratio, kAtMost, 4.5);
  rec.profile(std::move(prof));
}

void bm_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "brunn-minkowski");
  const int samples = samples_or(c, 100);
  for (int n : sweep(c, {2, 3})) {
    const auto basis = symmetric_basis(n);
    double min_eig = std::numeric_limits<double>::infinity();
    json w;
    for (int i = 0; i < samples; ++i) {
      const Mat a = random_spd(n, rng);
      ConeBasis cone{basis, Vec(basis.size())};
      int k = 0;
      for (int r = 0; r < n; ++r)
        for (int col = r; col < n; ++col) cone.point(k++) = a(r, col);
      const double e = Eigen::SelfAdjointEigenSolver<Mat>(bm_hessian(cone)).eigenvalues().minCoeff();
      if (e < min_eig) w = {{"A", matrix_json(a)}};
      min_eig = std::min(min_eig, e);
    }
    rec.check(tag("bm.strict-convexity", "n", n), "log det is strictly convex on the cone", min_eig, kAtLeast,
              std::numeric_limits<double>::min(), w);

    std::vector<double> ts;
    for (int i = 0; i <= 20; ++i) ts.push_back(i / 20.0);
    double rho = std::numeric_limits<double>::infinity(), logconv = rho, best = rho;
    for (int i = 0; i < 20; ++i) {
      const auto p = mabuchi_profile(random_spd(n, rng), random_spd(n, rng), Vec::Ones(n), ts);
      rho = std::min(rho, p.min_rho);
      logconv = std::min(logconv, p.min_log_second_difference);
      best = std::min(best, p.best_constant);
    }
    rec.check(tag("mabuchi.rho-nonnegative", "n", n), "Mabuchi functional is convex", rho, kAtLeast, -1e-10);
    rec.check(tag("mabuchi.log-convexity", "n", n), "Mabuchi functional is convex", logconv, kAtLeast, -1e-8);
    rec.measure(tag("mabuchi.best-constant", "n", n), best, "min (log rho)_tt / rho on the quadratic class");
  }
}

void projbundle_suite(const SuiteConfig& c, Recorder& rec) {
  Rng rng = suite_rng(c, "projbundle");
  const int samples = samples_or(c, 100);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto point = [&](int n, double scale) {
    CVec z(n);
    for (int i = 0; i < n; ++i) z(i) = scale * cd(u(rng), u(rng));
    return z;
  };
  for (int r : sweep(c, {2, 3})) {
    if (r < 2) throw ConfigError("projbundle: rank must be at least 2");
    double top = 0.0, assembly = 0.0, fs = 0.0, closed = 0.0, flatness = 0.0;
    bool fiber_pd = true;
    json w;
    for (int m : {1, 2}) {
      auto model = twisted_bundle(random_pd(r, rng), m);
      for (int i = 0; i < samples; ++i) {
        model.chart = i % r;
        const CVec t = point(m, 0.7), v = point(r - 1, 1.5);
        const CMat form = pk_form(model, t, v);
        const double e = top_power(form, r);
        if (e > top) w = {{"h0", matrix_json(model.h.value(Vec::Zero(2 * m)))}, {"chart", model.chart}};
        top = std::max(top, e);
        assembly = std::max(assembly, max_abs(CMat(form - pk_form_direct(model, t, v))));
        fiber_pd = fiber_pd && Eigen::SelfAdjointEigenSolver<CMat>(form.bottomRightCorner(r - 1, r - 1)).eigenvalues().minCoeff() > 0.0;
        flatness = std::max(flatness, projective_flatness_residual(model, t));
      }
      std::vector<CVec> ws;
      for (int i = 0; i < 20; ++i) ws.push_back(point(r - 1, 2.0));
      fs = std::max(fs, fiber_fs_check(model, point(m, 0.3), ws));
      closed = std::max(closed, pk_form_closedness(model, point(m, 0.5), point(r - 1, 1.0)));
    }
    std::vector<double> twists;
    for (int a = 0; a < r; ++a) twists.push_back(1.0 + a);
    const auto split = split_bundle(twists);
    const CVec t0 = one(0.5), w0 = CVec::Ones(r - 1);
    const double witness = top_power(pk_form(split, t0, w0), r);
    closed = std::max(closed, pk_form_closedness(split, one(cd(0.2, -0.1)), point(r - 1, 1.0)));
    rec.check(tag("proj.flatness", "r", r), "projective flatness", flatness, kAtMost, 1e-12);
    rec.check(tag("proj.top-power", "r", r), "projectively flat bundles give Poisson-Kahler forms", top, kAtMost, 1e-10, w);
    rec.require(tag("proj.fiber-positive", "r", r), "projectively flat bundles give Poisson-Kahler forms", fiber_pd);
    rec.check(tag("proj.assembly", "r", r), "plumbing", assembly, kAtMost, 1e-10);
    rec.check(tag("proj.falsifier", "r", r), "non-projectively-flat falsifier", witness, kAtLeast, 1e-3);
    rec.check(tag("proj.falsifier-flatness", "r", r), "non-projectively-flat falsifier", projective_flatness_residual(split, t0),
              kAtLeast, 0.1);
    rec.check(tag("proj.fubini-study", "r", r), "fiber restriction is Fubini-Study", fs, kAtMost, 1e-10);
    rec.check(tag("proj.closedness", "r", r), "the form is closed", closed, kAtMost, 1e-6);
  }
}

using SuiteFn = void (*)(const SuiteConfig&, Recorder&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"kns-roundtrip", kns_roundtrip},
      {"higgs", higgs_suite},
      {"burns-bounds", burns_suite},
      {"curvature-formula", curvature_formula_suite},
      {"trace-inequality", trace_suite},
      {"elliptic", elliptic_suite},
      {"schumacher", schumacher_suite},
      {"pk-equivalence", pk_suite},
      {"geodesics", geodesics_suite},
      {"brunn-minkowski", bm_suite},
      {"projbundle", projbundle_suite},
  };
  return r;
}

void validate(const SuiteConfig& c) {
  if (c.suite != "all" && std::none_of(registry().begin(), registry().end(), [&](const auto& e) { return e.first == c.suite; }))
    throw ConfigError("unknown suite '" + c.suite + "'");
  if (c.n && *c.n < 1) throw ConfigError("n must be at least 1");
  if (c.n && *c.n > 8) throw ConfigError("n must be at most 8");
  if (c.samples && *c.samples < 1) throw ConfigError("samples must be at least 1");
  if (c.grid < 8 || c.grid % 2) throw ConfigError("grid must be even and at least 8");
  if ((!c.model.empty() || !c.model_params.empty()) && c.suite != "schumacher")
    throw ConfigError("only the schumacher suite accepts a model");
}

struct Outcome {
  SuiteReport report;
  std::vector<std::string> unused;
};

Outcome run_one(const SuiteConfig& c, const std::string& name, SuiteFn fn) {
  Recorder rec(c);
  fn(c, rec);
  auto unused = rec.unused_overrides();
  return {std::move(rec).finish(name), std::move(unused)};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.first);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const SuiteConfig& config) {
  validate(config);
  std::vector<std::future<Outcome>> jobs;
  for (const auto& [name, fn] : registry())
    if (config.suite == "all" || config.suite == name)
      jobs.push_back(std::async(std::launch::async, [&config, name = name, fn = fn] { return run_one(config, name, fn); }));
  SuiteReport merged{config.suite, config, {}, {}, {}};
  std::set<std::string> unused;
  bool first = true;
  for (auto& job : jobs) {
    Outcome o = job.get();
    std::set<std::string> mine(o.unused.begin(), o.unused.end());
    if (first) {
      unused = mine;
      first = false;
    } else {
      std::set<std::string> both;
      std::set_intersection(unused.begin(), unused.end(), mine.begin(), mine.end(), std::inserter(both, both.begin()));
      unused = both;
    }
    for (auto& ch : o.report.checks) merged.checks.push_back(std::move(ch));
    for (auto& m : o.report.measurements) merged.measurements.push_back(std::move(m));
    for (auto& p : o.report.profiles) merged.profiles.push_back(std::move(p));
  }
  if (!unused.empty()) throw ConfigError("tolerance override names no check: " + *unused.begin());
  return merged;
}

}  // namespace pklab
