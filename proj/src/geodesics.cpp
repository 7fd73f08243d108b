#include "pklab/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pklab {

namespace {

constexpr double kClamp = 1e-14;

Eigen::LLT<CMat> checked_llt(const CMat& a, const char* what) {
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success || max_abs(CMat(a - a.adjoint())) > 1e-10 * std::max(1.0, max_abs(a)))
    throw PositivityError(std::string(what) + ": matrix is not Hermitian positive definite");
  return llt;
}

struct GeodesicData {
  CMat half;  // A0^{1/2}
  CMat q;     // eigenvectors of A0^{-1/2} A1 A0^{-1/2}
  Vec loglam;

  GeodesicData(const CMat& a0, const CMat& a1) {
    checked_llt(a0, "hermitian_geodesic");
    checked_llt(a1, "hermitian_geodesic");
    Eigen::SelfAdjointEigenSolver<CMat> e0(a0);
    const Vec s = e0.eigenvalues().cwiseMax(kClamp).cwiseSqrt();
    half = e0.eigenvectors() * s.asDiagonal() * e0.eigenvectors().adjoint();
    const CMat ihalf = e0.eigenvectors() * s.cwiseInverse().asDiagonal() * e0.eigenvectors().adjoint();
    CMat mid = ihalf * a1 * ihalf;
    mid = 0.5 * (mid + mid.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> e1(mid);
    q = e1.eigenvectors();
    loglam = e1.eigenvalues().cwiseMax(kClamp).array().log();
  }

  CMat at(double t, int order) const {
    const Vec w = (t * loglam).array().exp() * loglam.array().pow(order);
    const CMat m = half * q;
    return m * w.asDiagonal() * m.adjoint();
  }
};

}  // namespace

CMat theta_tt(const PathSample& s) {
  const auto llt = checked_llt(s.a, "theta_tt");
  return s.dda - s.da * llt.solve(s.da);
}

CMat theta_tt(const HermitianPath& path, double t) { return theta_tt(path(t)); }

CMat hermitian_geodesic(const CMat& a0, const CMat& a1, double t) {
  require_dims(a0.rows() == a0.cols() && a0.rows() == a1.rows() && a1.rows() == a1.cols(),
               "hermitian_geodesic: endpoints must be square of equal size");
  if (t == 0.0) return a0;
  if (t == 1.0) return a1;
  return GeodesicData(a0, a1).at(t, 0);
}

HermitianPath geodesic_path(const CMat& a0, const CMat& a1) {
  require_dims(a0.rows() == a1.rows(), "geodesic_path: endpoint size mismatch");
  const GeodesicData g(a0, a1);
  return [g](double t) { return PathSample{g.at(t, 0), g.at(t, 1), g.at(t, 2)}; };
}

HermitianPath linear_path(const CMat& a0, const CMat& a1) {
  require_dims(a0.rows() == a1.rows(), "linear_path: endpoint size mismatch");
  return [a0, a1](double t) {
    return PathSample{(1.0 - t) * a0 + t * a1, a1 - a0, CMat::Zero(a0.rows(), a0.cols())};
  };
}

CMat hermitian_potential_hessian(const PathSample& s, const CVec& z) {
  const int n = static_cast<int>(s.a.rows());
  require_dims(z.size() == n, "hermitian_potential_hessian: point dimension mismatch");
  // d/dt dbar/dt of f(Re t) is f''/4; d/dt of f(Re t) is f'/2.
  CMat h(n + 1, n + 1);
  h(0, 0) = (z.transpose() * s.dda * z.conjugate())(0, 0) / 4.0;
  const CVec cross = s.da.transpose() * z / 2.0;  // dt dbar z_k
  h.block(0, 1, 1, n) = cross.transpose();
  h.block(1, 0, n, 1) = cross.conjugate();
  h.bottomRightCorner(n, n) = s.a;
  return h;
}

double ma_determinant(const CMat& hessian) { return hessian.determinant().real(); }

CMat complex_legendre(const CMat& a) {
  const auto llt = checked_llt(a, "complex_legendre");
  const CMat inv = llt.solve(CMat::Identity(a.rows(), a.cols()));
  return 0.5 * (inv + inv.adjoint());
}

HermitianPath complex_legendre(const HermitianPath& path) {
  return [path](double t) {
    const PathSample s = path(t);
    const CMat b = complex_legendre(s.a);
    const CMat db = -b * s.da * b;
    return PathSample{b, db, 2.0 * b * s.da * b * s.da * b - b * s.dda * b};
  };
}

Mat ConeBasis::matrix() const {
  require_dims(!basis.empty() && static_cast<int>(basis.size()) == point.size(), "ConeBasis: coefficient count mismatch");
  Mat a = Mat::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t j = 0; j < basis.size(); ++j) a += point(static_cast<int>(j)) * basis[j];
  return a;
}

Mat bm_hessian(const ConeBasis& cone) {
  const Mat a = cone.matrix();
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) throw DomainError("bm_hessian: point is outside the positive cone");
  const int k = static_cast<int>(cone.basis.size());
  std::vector<Mat> solved;
  for (const Mat& b : cone.basis) solved.push_back(llt.solve(b));
  Mat h(k, k);
  for (int j = 0; j < k; ++j)
    for (int l = j; l < k; ++l) h(j, l) = h(l, j) = (solved[j] * solved[l]).trace();
  return h;
}

std::vector<Mat> symmetric_basis(int n) {
  std::vector<Mat> out;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Mat e = Mat::Zero(n, n);
      e(a, b) = e(b, a) = 1.0;
      out.push_back(e);
    }
  return out;
}

MabuchiProfile mabuchi_profile(const Mat& m0, const Mat& m1, const Vec& half_widths, const std::vector<double>& t) {
  require_dims(m0.rows() == m1.rows() && half_widths.size() == m0.rows(), "mabuchi_profile: dimension mismatch");
  const double vol = (2.0 * half_widths).prod();
  const Mat d = m1 - m0;
  MabuchiProfile p;
  p.t = t;
  p.min_rho = std::numeric_limits<double>::infinity();
  for (double s : t) {
    const Mat m = (1.0 - s) * m0 + s * m1;
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success) throw PositivityError("mabuchi_profile: Hessian degenerates on P");
    const Mat x = llt.solve(d);
    p.rho.push_back((x * x).trace());
    p.integral.push_back(vol * p.rho.back());
    p.min_rho = std::min(p.min_rho, p.rho.back());
  }
  const double scale = std::max(1.0, max_abs(d));
  p.degenerate = max_abs(d) <= 1e-14 * scale;
  if (p.degenerate || t.size() < 3) return p;
  p.min_log_second_difference = std::numeric_limits<double>::infinity();
  p.best_constant = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
    const double l0 = std::log(p.integral[i - 1]), l1 = std::log(p.integral[i]), l2 = std::log(p.integral[i + 1]);
    // Second divided difference on a possibly non-uniform grid.
    const double dd = 2.0 * ((l2 - l1) / h1 - (l1 - l0) / h0) / (h0 + h1);
    p.min_log_second_difference = std::min(p.min_log_second_difference, dd);
    p.best_constant = std::min(p.best_constant, dd / p.rho[i]);
  }
  return p;
}

}  // namespace pklab
