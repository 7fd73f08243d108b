#include "pklab/projbundle.hpp"

#include <algorithm>
#include <cmath>

#include "pklab/exterior.hpp"

namespace pklab {

namespace {

Vec base_point(const BundleMetricModel& model, const CVec& t) {
  require_dims(t.size() == model.m, "bundle model: base point dimension mismatch");
  Vec x(2 * model.m);
  for (int j = 0; j < model.m; ++j) x.segment(2 * j, 2) << t(j).real(), t(j).imag();
  return x;
}

Eigen::LLT<CMat> checked_llt(const CMat& h) {
  Eigen::LLT<CMat> llt(h);
  if (llt.info() != Eigen::Success) throw PositivityError("bundle metric is not positive definite");
  return llt;
}

CVec chart_vector(int r, int chart, const CVec& w) {
  require_dims(w.size() == r - 1, "chart point must have r - 1 coordinates");
  if (chart < 0 || chart >= r) throw DomainError("chart index out of range");
  CVec v(r);
  for (int a = 0, k = 0; a < r; ++a) v(a) = a == chart ? cd(1.0) : w(k++);
  return v;
}

std::vector<int> free_indices(int r, int chart) {
  std::vector<int> out;
  for (int a = 0; a < r; ++a)
    if (a != chart) out.push_back(a);
  return out;
}

}  // namespace

BundleCurvature bundle_curvature(const BundleMetricModel& model, const CVec& t) {
  const Vec x = base_point(model, t);
  const int m = model.m;
  const CMat h = model.h.value(x);
  const auto llt = checked_llt(h);
  std::vector<CMat> dh, dbarh;
  for (int j = 0; j < m; ++j) {
    dh.push_back(model.h.wirtinger(x, {{j, false}}));
    dbarh.push_back(model.h.wirtinger(x, {{j, true}}));
  }
  BundleCurvature c;
  c.r.assign(m, std::vector<CMat>(m));
  c.ric.resize(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      c.r[j][k] = -model.h.wirtinger(x, {{j, false}, {k, true}}) + dh[j] * llt.solve(dbarh[k]);
      c.ric(j, k) = llt.solve(c.r[j][k]).trace();
    }
  return c;
}

double projective_flatness_residual(const BundleMetricModel& model, const CVec& t) {
  const BundleCurvature c = bundle_curvature(model, t);
  const auto llt = checked_llt(model.h.value(base_point(model, t)));
  const CMat id = CMat::Identity(model.r, model.r);
  double worst = 0.0;
  for (int j = 0; j < model.m; ++j)
    for (int k = 0; k < model.m; ++k)
      worst = std::max(worst, max_abs(CMat(llt.solve(c.r[j][k]) - c.ric(j, k) / double(model.r) * id)));
  return worst;
}

CMat pk_form(const BundleMetricModel& model, const CVec& t, const CVec& w) {
  const int r = model.r, m = model.m, d = model.dim();
  const Vec x = base_point(model, t);
  const CVec v = chart_vector(r, model.chart, w);
  const CMat h = model.h.value(x);
  const auto llt = checked_llt(h);
  const BundleCurvature curv = bundle_curvature(model, t);
  const double norm = (v.transpose() * h * v.conjugate())(0, 0).real();
  // d^2 log H / dv_a dconj(v_b).
  const CVec hv = h * v.conjugate();
  const CMat fiber = h / norm - hv * (v.transpose() * h) / (norm * norm);
  // delta v = E (dt, dw): delta v_a = dv_a + sum_j (v^T d_j h h^{-1})_a dt_j.
  const CMat hinv_t = llt.solve(CMat::Identity(r, r)).transpose();
  CMat e = CMat::Zero(r, d);
  for (int j = 0; j < m; ++j) e.col(j) = hinv_t * model.h.wirtinger(x, {{j, false}}).transpose() * v;
  const auto free = free_indices(r, model.chart);
  for (int a = 0; a < r - 1; ++a) e(free[a], m + a) = 1.0;
  CMat out = e.transpose() * fiber * e.conjugate();
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      out(j, k) += -(v.transpose() * curv.r[j][k] * v.conjugate())(0, 0) / norm + curv.ric(j, k) / double(r);
  return out;
}

CMat pk_form_direct(const BundleMetricModel& model, const CVec& t, const CVec& w) {
  const int m = model.m, d = model.dim();
  const ScalarField f = model.log_norm(model.chart);
  Vec x(2 * d);
  x.head(2 * m) = base_point(model, t);
  require_dims(w.size() == model.r - 1, "chart point must have r - 1 coordinates");
  for (int a = 0; a < model.r - 1; ++a) x.segment(2 * (m + a), 2) << w(a).real(), w(a).imag();
  CMat out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out(a, b) = f.wirtinger(x, {{a, false}, {b, true}});
  out.topLeftCorner(m, m) += bundle_curvature(model, t).ric / double(model.r);
  return out;
}

double top_power(const CMat& coeff, int r) {
  if (r > coeff.rows()) return 0.0;
  return std::tgamma(r + 1.0) * max_abs(compound(coeff, r));
}

CMat fubini_study(const CMat& h, int chart, const CVec& w) {
  const int r = static_cast<int>(h.rows());
  const CVec v = chart_vector(r, chart, w);
  const CMat c = checked_llt(h).matrixL();
  const CVec u = c.transpose() * v;
  const double n2 = u.squaredNorm();
  const CMat s = CMat::Identity(r, r) / n2 - u.conjugate() * u.transpose() / (n2 * n2);
  const CMat full = c * s * c.adjoint();
  const auto free = free_indices(r, chart);
  CMat out(r - 1, r - 1);
  for (int a = 0; a < r - 1; ++a)
    for (int b = 0; b < r - 1; ++b) out(a, b) = full(free[a], free[b]);
  return out;
}

double fiber_fs_check(const BundleMetricModel& model, const CVec& t, const std::vector<CVec>& ws) {
  const CMat h = model.h.value(base_point(model, t));
  const int n = model.fiber_dim();
  double worst = 0.0;
  for (const CVec& w : ws)
    worst = std::max(worst, max_abs(CMat(pk_form(model, t, w).bottomRightCorner(n, n) - fubini_study(h, model.chart, w))));
  return worst;
}

double pk_form_closedness(const BundleMetricModel& model, const CVec& t, const CVec& w, const FdOptions& fd) {
  const int m = model.m, d = model.dim();
  Vec x0(2 * d);
  for (int j = 0; j < m; ++j) x0.segment(2 * j, 2) << t(j).real(), t(j).imag();
  for (int a = 0; a < model.r - 1; ++a) x0.segment(2 * (m + a), 2) << w(a).real(), w(a).imag();
  // omega(U, W) = -2 Im(u^T M conj(w)) on real coordinate vectors.
  CMat basis = CMat::Zero(d, 2 * d);
  for (int a = 0; a < d; ++a) {
    basis(a, 2 * a) = 1.0;
    basis(a, 2 * a + 1) = kI;
  }
  auto form = [&](const Vec& x) {
    CVec tt(m), ww(model.r - 1);
    for (int j = 0; j < m; ++j) tt(j) = cd(x(2 * j), x(2 * j + 1));
    for (int a = 0; a < model.r - 1; ++a) ww(a) = cd(x(2 * (m + a)), x(2 * (m + a) + 1));
    return Mat(-2.0 * (basis.transpose() * pk_form(model, tt, ww) * basis.conjugate()).imag());
  };
  const int rd = 2 * d;
  std::vector<Mat> deriv(rd);
  for (int a = 0; a < rd; ++a)
    deriv[a] = central_derivative(
        [&](double s) {
          Vec y = x0;
          y(a) += s;
          return form(y);
        },
        fd);
  double worst = 0.0;
  for (int a = 0; a < rd; ++a)
    for (int b = a + 1; b < rd; ++b)
      for (int c = b + 1; c < rd; ++c)
        worst = std::max(worst, std::abs(deriv[a](b, c) - deriv[b](a, c) + deriv[c](a, b)));
  return worst;
}

BundleMetricModel flat_bundle(int r) {
  return make_bundle_model("flat", r, 1, [r](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> h(r * r, x[0] * 0.0);
    for (int a = 0; a < r; ++a) h[a * r + a] = x[0] * 0.0 + 1.0;
    return h;
  });
}

BundleMetricModel twisted_bundle(const CMat& h0, int m) {
  checked_llt(h0);
  const int r = static_cast<int>(h0.rows());
  return make_bundle_model("twisted", r, m, [h0, r, m](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    using std::exp;
    T t2 = x[0] * 0.0;
    for (int k = 0; k < 2 * m; ++k) t2 = t2 + x[k] * x[k];
    const T e = exp(-(t2 + 0.3 * t2 * t2));
    std::vector<T> h(r * r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) h[a * r + b] = e * h0(a, b);
    return h;
  });
}

BundleMetricModel split_bundle(const std::vector<double>& twists) {
  const int r = static_cast<int>(twists.size());
  return make_bundle_model("split", r, 1, [twists, r](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    using std::exp;
    const T t2 = x[0] * x[0] + x[1] * x[1];
    std::vector<T> h(r * r, x[0] * 0.0);
    for (int a = 0; a < r; ++a) h[a * r + a] = exp(-twists[a] * t2);
    return h;
  });
}

BundleMetricModel line_bundle() {
  return make_bundle_model("line", 1, 1, [](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    using std::exp;
    const T t2 = x[0] * x[0] + x[1] * x[1];
    return std::vector<T>{exp(-t2 - t2 * t2)};
  });
}

}  // namespace pklab
