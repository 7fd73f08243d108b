#include "pklab/fibration.hpp"

#include <algorithm>

#include "pklab/exterior.hpp"

namespace pklab {

Vec FibrationModel::real_point(const CVec& t, const CVec& zeta) const {
  require_dims(t.size() == m && zeta.size() == n, "FibrationModel: point dimension mismatch");
  Vec x(2 * (m + n));
  for (int a = 0; a < m; ++a) x.segment(2 * a, 2) << t(a).real(), t(a).imag();
  for (int a = 0; a < n; ++a) x.segment(2 * (m + a), 2) << zeta(a).real(), zeta(a).imag();
  return x;
}

CVec holomorphic_direction(int dim, const CVec& coeffs) {
  CVec d = CVec::Zero(2 * dim);
  for (int a = 0; a < dim; ++a) d += coeffs(a) * wirtinger_direction(2 * dim, Wirt{a, false});
  return d;
}

CVec antiholomorphic_direction(int dim, const CVec& coeffs) {
  CVec d = CVec::Zero(2 * dim);
  for (int a = 0; a < dim; ++a) d += coeffs(a) * wirtinger_direction(2 * dim, Wirt{a, true});
  return d;
}

namespace {

CVec unit(int dim, int a) {
  CVec e = CVec::Zero(dim);
  e(a) = 1.0;
  return e;
}

// Derivative of the complex Hessian along up to two extra directions.
CMat hessian_along(const FibrationModel& model, const Vec& x, std::span<const CVec> extra) {
  const int d = model.dim();
  CMat h(d, d);
  std::vector<CVec> dirs(extra.begin(), extra.end());
  dirs.resize(extra.size() + 2);
  for (int a = 0; a < d; ++a) {
    dirs[extra.size()] = wirtinger_direction(2 * d, Wirt{a, false});
    for (int b = 0; b < d; ++b) {
      dirs[extra.size() + 1] = wirtinger_direction(2 * d, Wirt{b, true});
      h(a, b) = model.potential.derivative(x, dirs);
    }
  }
  return h;
}

// Derivative of the lifts -R G^{-1} given the derivative of the Hessian.
CMat lifts_derivative(const PointGeometry& g, const CMat& dh, int m, int n) {
  const CMat r = g.hessian.topRightCorner(m, n);
  const CMat dr = dh.topRightCorner(m, n);
  const CMat dg = dh.bottomRightCorner(n, n);
  return -dr * g.fiber_inv + r * g.fiber_inv * dg * g.fiber_inv;
}

CMat c_derivative(const PointGeometry& g, const CMat& dh, int m, int n) {
  const CMat r = g.hessian.topRightCorner(m, n);
  const CMat col = g.hessian.bottomLeftCorner(n, m);
  const CMat& gi = g.fiber_inv;
  return dh.topLeftCorner(m, m) - dh.topRightCorner(m, n) * gi * col +
         r * gi * dh.bottomRightCorner(n, n) * gi * col - r * gi * dh.bottomLeftCorner(n, m);
}

// Cofactors d det(H) / d H(a, b).
CMat cofactors(const CMat& h) {
  const int d = static_cast<int>(h.rows());
  CMat cof(d, d);
  if (d == 1) {
    cof(0, 0) = 1.0;
    return cof;
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      CMat minor(d - 1, d - 1);
      for (int i = 0, ii = 0; i < d; ++i) {
        if (i == a) continue;
        for (int j = 0, jj = 0; j < d; ++j) {
          if (j == b) continue;
          minor(ii, jj++) = h(i, j);
        }
        ++ii;
      }
      cof(a, b) = ((a + b) % 2 ? -1.0 : 1.0) * minor.determinant();
    }
  return cof;
}

double max_abs_vec(const CVec& v) { return max_abs(v); }

}  // namespace

CMat complex_hessian(const FibrationModel& model, const Vec& x) { return hessian_along(model, x, {}); }

CMat complex_hessian_derivative(const FibrationModel& model, const Vec& x, const CVec& direction) {
  const CVec dirs[] = {direction};
  return hessian_along(model, x, dirs);
}

PointGeometry point_geometry(const FibrationModel& model, const CVec& t, const CVec& zeta) {
  const int m = model.m, n = model.n;
  const Vec x = model.real_point(t, zeta);
  PointGeometry g;
  g.hessian = complex_hessian(model, x);
  g.fiber = g.hessian.bottomRightCorner(n, n);
  Eigen::LLT<CMat> llt(g.fiber);
  if (llt.info() != Eigen::Success || (g.fiber.diagonal().real().array() <= 0.0).any())
    throw PositivityError("fiber metric is not positive definite");
  g.fiber_inv = llt.solve(CMat::Identity(n, n));
  const CMat r = g.hessian.topRightCorner(m, n);
  g.lifts = -r * g.fiber_inv;
  g.c = g.hessian.topLeftCorner(m, m) - r * g.fiber_inv * g.hessian.bottomLeftCorner(n, m);
  std::vector<CMat> dlifts;
  for (int beta = 0; beta < n; ++beta) {
    const CMat dh = complex_hessian_derivative(model, x, wirtinger_direction(2 * model.dim(), Wirt{m + beta, true}));
    dlifts.push_back(lifts_derivative(g, dh, m, n));
  }
  for (int j = 0; j < m; ++j) {
    CMat a(n, n);
    for (int alpha = 0; alpha < n; ++alpha)
      for (int beta = 0; beta < n; ++beta) a(alpha, beta) = dlifts[beta](j, alpha);
    g.ks.push_back(a);
  }
  return g;
}

cd ks_pairing(const PointGeometry& g, int j, int k) {
  return (g.ks[j].transpose() * g.fiber * g.ks[k].conjugate() * g.fiber_inv).trace();
}

namespace {

// ddbar log det G along (U, conj W) where du, dwbar are real-coordinate directions.
cd log_det_ddbar(const FibrationModel& model, const Vec& x, const CVec& du, const CVec& dwbar) {
  const int m = model.m, n = model.n;
  const CMat g = complex_hessian(model, x).bottomRightCorner(n, n);
  const CMat gi = g.inverse();
  const CVec one_u[] = {du};
  const CVec one_w[] = {dwbar};
  const CVec both[] = {du, dwbar};
  const CMat gu = hessian_along(model, x, one_u).bottomRightCorner(n, n);
  const CMat gw = hessian_along(model, x, one_w).bottomRightCorner(n, n);
  const CMat guw = hessian_along(model, x, both).bottomRightCorner(n, n);
  (void)m;
  return (gi * guw).trace() - (gi * gu * gi * gw).trace();
}

}  // namespace

cd canonical_curvature(const FibrationModel& model, const Vec& x, const CVec& u, const CVec& w) {
  const int d = model.dim();
  return log_det_ddbar(model, x, holomorphic_direction(d, u), antiholomorphic_direction(d, w.conjugate()));
}

CMat canonical_curvature(const FibrationModel& model, const Vec& x) {
  const int d = model.dim();
  CMat out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out(a, b) = canonical_curvature(model, x, unit(d, a), unit(d, b));
  return out;
}

FiberState fiber_state(const FibrationModel& model, const CVec& t) {
  if (!model.proper()) throw PropernessError("fiber_state: model '" + model.name + "' has no compact fibers");
  const int n = model.n;
  const CMat lat = model.lattice(t);
  require_dims(lat.rows() == n && lat.cols() == 2 * n, "fiber lattice must be n x 2n");
  Mat periods(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int a = 0; a < n; ++a) {
      periods(2 * a, i) = lat(a, i).real();
      periods(2 * a + 1, i) = lat(a, i).imag();
    }
  FiberState s{model, t, TorusGrid(periods, model.grid), {}, {}, CVec()};
  s.volume_density.resize(s.grid.size());
  const double scale = std::pow(2.0, n);
  for (int idx = 0; idx < s.grid.size(); ++idx) {
    const Vec z = s.grid.point(idx);
    CVec zeta(n);
    for (int a = 0; a < n; ++a) zeta(a) = cd(z(2 * a), z(2 * a + 1));
    s.points.push_back(model.real_point(t, zeta));
    s.geometry.push_back(point_geometry(model, t, zeta));
    s.volume_density(idx) = s.geometry.back().fiber.determinant().real() * scale;
  }
  return s;
}

double ks_closedness(const FiberState& s) {
  const int n = s.model.n;
  double worst = 0.0;
  for (int j = 0; j < s.model.m; ++j)
    for (int alpha = 0; alpha < n; ++alpha)
      for (int beta = 0; beta < n; ++beta)
        for (int gamma = beta + 1; gamma < n; ++gamma) {
          const CVec ab = s.collect([&](const PointGeometry& g, std::size_t) { return g.ks[j](alpha, beta); });
          const CVec ag = s.collect([&](const PointGeometry& g, std::size_t) { return g.ks[j](alpha, gamma); });
          worst = std::max(worst, max_abs_vec(s.grid.wirtinger(ab, gamma, true) - s.grid.wirtinger(ag, beta, true)));
        }
  return worst;
}

PkResidual pk_residual(const FibrationModel& model, std::span<const CVec> ts, std::span<const CVec> zetas) {
  PkResidual r;
  for (const CVec& t : ts)
    for (const CVec& z : zetas) {
      const PointGeometry g = point_geometry(model, t, z);
      r.omega_power = std::max(r.omega_power, max_abs(compound(g.hessian, model.n + 1)));
      r.c_sup = std::max(r.c_sup, max_abs(g.c));
    }
  return r;
}

PkResidual pk_residual(const FibrationModel& model, std::span<const CVec> ts) {
  PkResidual r;
  for (const CVec& t : ts) {
    const FiberState s = fiber_state(model, t);
    for (const auto& g : s.geometry) {
      r.omega_power = std::max(r.omega_power, max_abs(compound(g.hessian, model.n + 1)));
      r.c_sup = std::max(r.c_sup, max_abs(g.c));
    }
  }
  return r;
}

CMat wp_fiber_metric(const FiberState& s) {
  const int m = s.model.m;
  CMat out(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      const CVec f = s.collect([&](const PointGeometry& g, std::size_t i) { return ks_pairing(g, j, k) * s.volume_density(i); });
      out(j, k) = s.grid.integrate(f);
    }
  return out;
}

CMat wp_fiber_metric(const FibrationModel& model, const CVec& t) { return wp_fiber_metric(fiber_state(model, t)); }

SchumacherReport schumacher_residual(const FiberState& s, int j, int k) {
  const int m = s.model.m, n = s.model.n;
  require_dims(j >= 0 && j < m && k >= 0 && k < m, "schumacher_residual: index out of range");
  SchumacherReport rep;
  const CVec c = s.collect([&](const PointGeometry& g, std::size_t) { return g.c(j, k); });
  // Energies are mean squares; c is measured against the fiber metric scale so
  // that a vanishing c does not read as unresolved rounding noise.
  double scale = 0.0;
  for (const auto& g : s.geometry) scale = std::max(scale, g.fiber.squaredNorm());
  rep.nyquist = s.grid.high_mode_fraction(c, scale);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      rep.nyquist = std::max(rep.nyquist, s.grid.high_mode_fraction(
                                              s.collect([&](const PointGeometry& g, std::size_t) { return g.fiber(a, b); })));
  if (rep.nyquist > 1e-20) throw ResolutionError("schumacher_residual: fiber grid does not resolve the data");
  rep.lhs = s.collect([&](const PointGeometry& g, std::size_t i) {
    CVec u(m + n), w(m + n);
    u << CVec::Unit(m, j), g.lifts.row(j).transpose();
    w << CVec::Unit(m, k), g.lifts.row(k).transpose();
    return canonical_curvature(s.model, s.points[i], u, w);
  });
  rep.inner = s.collect([&](const PointGeometry& g, std::size_t) { return ks_pairing(g, j, k); });
  rep.box_c = CVec::Zero(s.grid.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const CVec dd = s.grid.mixed(c, a, b);
      for (int i = 0; i < s.grid.size(); ++i) rep.box_c(i) -= s.geometry[i].fiber_inv(b, a) * dd(i);
    }
  rep.residual = max_abs_vec(rep.lhs - rep.inner + rep.box_c);
  return rep;
}

SchumacherReport schumacher_residual(const FibrationModel& model, const CVec& t, int j, int k) {
  return schumacher_residual(fiber_state(model, t), j, k);
}

FujikiSchumacher fujiki_schumacher(const FiberState& s) {
  const int m = s.model.m, n = s.model.n;
  if (m != 1) throw CaseNotCoveredError("fujiki_schumacher: base dimension 1 only");
  FujikiSchumacher out;
  out.wp = wp_fiber_metric(s)(0, 0);
  const double scale = std::pow(2.0, n);
  CVec canon(s.grid.size()), scalar(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) {
    const PointGeometry& g = s.geometry[i];
    const CMat theta = canonical_curvature(s.model, s.points[i]);
    const CMat cof = cofactors(g.hessian);
    canon(i) = theta.cwiseProduct(cof).sum() * scale;
    // Scalar curvature of the fiber metric, with Ric = -ddbar log det g.
    const cd curv = -(g.fiber_inv.transpose().cwiseProduct(theta.bottomRightCorner(n, n))).sum();
    scalar(i) = curv * g.hessian.determinant() * scale;
  }
  out.canonical_term = s.grid.integrate(canon);
  out.scalar_term = s.grid.integrate(scalar);
  return out;
}

BochnerReport bkn_identity_check(const FiberState& s, const CVec& phi) {
  const int n = s.model.n;
  require_dims(phi.size() == s.grid.size(), "bkn_identity_check: fiber function size mismatch");
  const CMat& g0 = s.geometry.front().fiber;
  for (const auto& g : s.geometry)
    if (max_abs(g.fiber - g0) > 1e-10 * max_abs(g0))
      throw CaseNotCoveredError("bkn_identity_check: fiber metric is not flat");
  const CMat gi = g0.inverse();
  // V^phi = sum_beta phi_betabar g^{betabar alpha} d_alpha; kappa^phi(alpha, gamma) = dbar_gamma V^alpha.
  std::vector<CVec> dbar(n);
  for (int b = 0; b < n; ++b) dbar[b] = s.grid.wirtinger(phi, b, true);
  std::vector<CVec> vfield(n, CVec::Zero(s.grid.size()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) vfield[a] += gi(b, a) * dbar[b];
  std::vector<std::vector<CVec>> kappa(n, std::vector<CVec>(n));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) kappa[a][c] = s.grid.wirtinger(vfield[a], c, true);
  CVec box = CVec::Zero(s.grid.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) box -= gi(b, a) * s.grid.mixed(phi, a, b);
  CVec kk(s.grid.size());
  std::vector<CVec> pair(s.model.m, CVec(s.grid.size()));
  for (int i = 0; i < s.grid.size(); ++i) {
    CMat k(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) k(a, c) = kappa[a][c](i);
    kk(i) = (k.transpose() * g0 * k.conjugate() * gi).trace() * s.volume_density(i);
    for (int j = 0; j < s.model.m; ++j)
      pair[j](i) = (s.geometry[i].ks[j].transpose() * g0 * k.conjugate() * gi).trace() * s.volume_density(i);
    box(i) = std::norm(box(i)) * s.volume_density(i);
  }
  BochnerReport rep;
  rep.kappa_norm = std::sqrt(std::abs(s.grid.integrate(kk)));
  rep.box_norm = std::sqrt(std::abs(s.grid.integrate(box)));
  for (const CVec& p : pair) rep.ks_pairing = std::max(rep.ks_pairing, std::abs(s.grid.integrate(p)));
  return rep;
}

BracketReport bracket_check(const FibrationModel& model, const CVec& t, const CVec& zeta) {
  const int m = model.m, n = model.n, d = model.dim();
  const Vec x = model.real_point(t, zeta);
  const PointGeometry g = point_geometry(model, t, zeta);
  auto lift_vector = [&](int j) {
    CVec u(d);
    u << CVec::Unit(m, j), g.lifts.row(j).transpose();
    return u;
  };
  std::vector<CMat> along_v, along_vbar;  // derivatives of the lifts along V_j and conj(V_j)
  for (int j = 0; j < m; ++j) {
    const CVec u = lift_vector(j);
    along_v.push_back(lifts_derivative(g, complex_hessian_derivative(model, x, holomorphic_direction(d, u)), m, n));
    along_vbar.push_back(
        lifts_derivative(g, complex_hessian_derivative(model, x, antiholomorphic_direction(d, u.conjugate())), m, n));
  }
  std::vector<CMat> dc, dbarc;  // d c / dzeta_alpha and d c / dconj(zeta_beta)
  for (int a = 0; a < n; ++a) {
    dc.push_back(c_derivative(g, complex_hessian_derivative(model, x, wirtinger_direction(2 * d, Wirt{m + a, false})), m, n));
    dbarc.push_back(c_derivative(g, complex_hessian_derivative(model, x, wirtinger_direction(2 * d, Wirt{m + a, true})), m, n));
  }
  BracketReport rep;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      // [V_j, V_k] = (V_j a_k - V_k a_j) d/dzeta.
      rep.holomorphic = std::max(rep.holomorphic, max_abs(CMat(along_v[j].row(k) - along_v[k].row(j))));
      // [V_j, conj V_k] = -conj(V_k)(a_j) d/dzeta + V_j(conj a_k) d/dconj(zeta).
      const CVec hol = -along_vbar[k].row(j).transpose();
      const CVec anti = along_vbar[j].row(k).transpose().conjugate();
      const CVec lhs_bar = g.fiber.transpose() * hol;  // coefficient of dconj(zeta^beta), over i
      const CVec lhs = -(g.fiber * anti);             // coefficient of dzeta^alpha, over i
      for (int a = 0; a < n; ++a) {
        rep.contraction = std::max({rep.contraction, std::abs(lhs_bar(a) - dbarc[a](j, k)), std::abs(lhs(a) - dc[a](j, k))});
        rep.fiber_dc = std::max({rep.fiber_dc, std::abs(dc[a](j, k)), std::abs(dbarc[a](j, k))});
      }
    }
  return rep;
}

Mat omega_prime(const FibrationModel& model, const Vec& x) {
  const int d = model.dim();
  CMat h = complex_hessian(model, x);
  CVec t(model.m), zeta(model.n);
  for (int a = 0; a < model.m; ++a) t(a) = cd(x(2 * a), x(2 * a + 1));
  for (int a = 0; a < model.n; ++a) zeta(a) = cd(x(2 * (model.m + a)), x(2 * (model.m + a) + 1));
  h.topLeftCorner(model.m, model.m) -= point_geometry(model, t, zeta).c;
  // omega(U, W) = -2 Im(u^T H conj(w)) with u = dw(U).
  CMat basis = CMat::Zero(d, 2 * d);
  for (int a = 0; a < d; ++a) {
    basis(a, 2 * a) = 1.0;
    basis(a, 2 * a + 1) = kI;
  }
  return -2.0 * (basis.transpose() * h * basis.conjugate()).imag();
}

double d_omega_prime(const FibrationModel& model, const Vec& x, const FdOptions& fd) {
  const int r = static_cast<int>(x.size());
  std::vector<Mat> deriv(r);
  for (int a = 0; a < r; ++a)
    deriv[a] = central_derivative(
        [&](double s) {
          Vec y = x;
          y(a) += s;
          return omega_prime(model, y);
        },
        fd);
  double worst = 0.0;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b)
      for (int c = b + 1; c < r; ++c)
        worst = std::max(worst, std::abs(deriv[a](b, c) - deriv[b](a, c) + deriv[c](a, b)));
  return worst;
}

}  // namespace pklab
