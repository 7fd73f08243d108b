#pragma once

// The form i (ddbar log H + Ric / r) on the projectivization of a Hermitian
// bundle over a ball in C^m, in one affine fiber chart at a time.

#include <functional>
#include <string>
#include <vector>

#include "pklab/ad.hpp"
#include "pklab/fd.hpp"

namespace pklab {

struct BundleMetricModel {
  std::string name;
  int r = 2;  // rank
  int m = 1;  // base dimension
  // h(t) with h(a, b) = h(s_a, s_b), over real base coordinates (Re t1, Im t1, ...).
  MatrixField h;
  // log H(t, v(w)) over (t, w) real coordinates for the given chart; used as an
  // independent Hessian oracle.
  std::function<ScalarField(int chart)> log_norm;
  int chart = 0;  // homogeneous coordinate normalized to 1

  int fiber_dim() const { return r - 1; }
  int dim() const { return m + r - 1; }
};

// h_fun(span<const T> x) returns the r * r entries of h row-major.
template <class F>
BundleMetricModel make_bundle_model(std::string name, int r, int m, F h_fun) {
  BundleMetricModel model;
  model.name = std::move(name);
  model.r = r;
  model.m = m;
  model.h = MatrixField::make(r, r, h_fun);
  model.log_norm = [h_fun, r, m](int chart) {
    return ScalarField::make([h_fun, r, m, chart](auto x) {
      using T = std::decay_t<decltype(x[0])>;
      const auto h = h_fun(x.subspan(0, 2 * m));
      // v = (w with 1 inserted at chart), H = sum h_ab v_a conj(v_b).
      std::vector<T> re(r), im(r);
      for (int a = 0, k = 0; a < r; ++a) {
        if (a == chart) {
          re[a] = x[0] * 0.0 + 1.0;
          im[a] = x[0] * 0.0;
        } else {
          re[a] = x[2 * m + 2 * k];
          im[a] = x[2 * m + 2 * k + 1];
          ++k;
        }
      }
      T sum = x[0] * 0.0;
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
          const T vv_re = re[a] * re[b] + im[a] * im[b];
          const T vv_im = im[a] * re[b] - re[a] * im[b];
          sum = sum + h[a * r + b] * (vv_re + cd(0.0, 1.0) * vv_im);
        }
      using std::log;
      return log(sum);
    });
  };
  return model;
}

// Chern curvature R_{jk} (r x r, lowered indices) and its trace Ric at t.
struct BundleCurvature {
  std::vector<std::vector<CMat>> r;  // r[j][k] = -d_j dbar_k h + d_j h h^{-1} dbar_k h
  CMat ric;                          // m x m, tr(h^{-1} R_{jk})
};
BundleCurvature bundle_curvature(const BundleMetricModel& model, const CVec& t);

// max_{jk} |h^{-1} R_{jk} - (Ric_{jk} / r) Id|.
double projective_flatness_residual(const BundleMetricModel& model, const CVec& t);

// Coefficient matrix M of omega = i sum M_ab dz_a ^ dconj(z_b) in (t, w),
// assembled from the curvature and the connection-twisted fiber differentials.
CMat pk_form(const BundleMetricModel& model, const CVec& t, const CVec& w);
// The same from the complex Hessian of log H plus Ric / r on the base block.
CMat pk_form_direct(const BundleMetricModel& model, const CVec& t, const CVec& w);

// Coefficient of omega^r: r! times the largest r x r minor of M.
double top_power(const CMat& coeff, int r);

// Fubini-Study coefficients of the inner product h on the chart, through the
// Cholesky factor h = C C^H (u = C^T v, standard FS in u).
CMat fubini_study(const CMat& h, int chart, const CVec& w);

// Sup over the sampled chart points of |fiber block of pk_form - fubini_study(h(t))|.
double fiber_fs_check(const BundleMetricModel& model, const CVec& t, const std::vector<CVec>& ws);

// Max |d omega| over (t, w), the real two-form differentiated by finite differences.
double pk_form_closedness(const BundleMetricModel& model, const CVec& t, const CVec& w, const FdOptions& fd = {});

// Model library.  Twisted trivial bundles e^{-lambda(t)} h0 are projectively
// flat; direct sums with distinct twists are not.
BundleMetricModel flat_bundle(int r);
BundleMetricModel twisted_bundle(const CMat& h0, int m = 1);  // lambda = |t|^2 + 0.3 |t|^4
BundleMetricModel split_bundle(const std::vector<double>& twists);  // diag(e^{-c_a |t|^2})
BundleMetricModel line_bundle();  // rank 1, h = e^{-|t|^2 - |t|^4}

}  // namespace pklab
