#include "pklab/symplin.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace pklab {

SymplecticSpace make_symplectic(Mat form) {
  require_dims(form.rows() == form.cols() && form.rows() % 2 == 0 && form.rows() > 0,
               "symplectic form must be a nonempty even square matrix");
  if (max_abs(form + form.transpose()) != 0.0) throw DomainError("symplectic form is not antisymmetric");
  Eigen::JacobiSVD<Mat> svd(form);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-12 * s(0)) throw DomainError("symplectic form is degenerate");
  return SymplecticSpace{static_cast<int>(form.rows() / 2), std::move(form)};
}

SymplecticSpace standard_symplectic(int n) {
  if (n < 1) throw DimensionError("standard_symplectic: n must be positive");
  Mat w = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    w(j, n + j) = 1.0;
    w(n + j, j) = -1.0;
  }
  return SymplecticSpace{n, w};
}

ComplexStructure::ComplexStructure(Mat j) : j_(std::move(j)) {
  require_dims(j_.rows() == j_.cols() && j_.rows() % 2 == 0 && j_.rows() > 0,
               "complex structure must be a nonempty even square matrix");
  const double scale = std::max(1.0, j_.cwiseAbs().rowwise().sum().maxCoeff());
  const Mat sq = j_ * j_ + Mat::Identity(j_.rows(), j_.cols());
  if (sq.cwiseAbs().rowwise().sum().maxCoeff() > 1e-12 * scale * scale)
    throw DomainError("J^2 != -I");
}

ComplexStructure standard_complex_structure(int n) {
  if (n < 1) throw DimensionError("standard_complex_structure: n must be positive");
  Mat j = Mat::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    j(n + a, a) = 1.0;   // J e_a = e_{n+a}
    j(a, n + a) = -1.0;  // J e_{n+a} = -e_a
  }
  return ComplexStructure(j);
}

Mat structure_metric(const SymplecticSpace& space, const ComplexStructure& j) {
  require_dims(space.form.rows() == j.matrix().rows(), "dimension mismatch between form and J");
  return space.form * j.matrix();
}

CompatibilityReport compatibility_report(const SymplecticSpace& space, const ComplexStructure& j) {
  CompatibilityReport r;
  r.metric = structure_metric(space, j);
  const double norm = r.metric.norm();
  const bool symmetric = max_abs(r.metric - r.metric.transpose()) <= 1e-10 * std::max(1.0, norm);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r.metric + r.metric.transpose()));
  r.min_eigenvalue = es.eigenvalues()(0);
  r.compatible = symmetric && r.min_eigenvalue > 1e-10 * norm;
  return r;
}

TypeProjectors type_projectors(const ComplexStructure& j) {
  const Eigen::Index d = j.matrix().rows();
  const CMat id = CMat::Identity(d, d);
  const CMat jd = j.dual().cast<cd>();
  return TypeProjectors{0.5 * (id - kI * jd), 0.5 * (id + kI * jd)};
}

UnitaryFrame standard_frame(int n) {
  CMat x = CMat::Zero(2 * n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    x(a, a) = s;
    x(n + a, a) = cd(0.0, s);
  }
  return UnitaryFrame{x};
}

namespace {

// Y^{-1} omega Y^{-H} for Y = [X, conj(X)]; for an adapted frame this is diag(iI, -iI).
CMat frame_gram(const Mat& form, const CMat& x) {
  const Eigen::Index n = x.cols();
  CMat y(x.rows(), 2 * n);
  y << x, x.conjugate();
  Eigen::PartialPivLU<CMat> lu(y);
  CMat yi = lu.inverse();
  return yi * form.cast<cd>() * yi.adjoint();
}

}  // namespace

UnitaryFrame adapted_frame(const SymplecticSpace& space, const ComplexStructure& j) {
  const int n = j.n();
  require_dims(space.n == n, "adapted_frame: dimension mismatch");
  const CMat p = type_projectors(j).p10;
  Eigen::ColPivHouseholderQR<CMat> qr(p);
  CMat x = qr.householderQ() * CMat::Identity(2 * n, n);
  // Re-project to remove rounding outside the (1,0) space.
  x = p * x;
  const CMat t = frame_gram(space.form, x);
  CMat h = -kI * t.topLeftCorner(n, n);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::LLT<CMat> llt(h);
  if (llt.info() != Eigen::Success) throw PositivityError("adapted_frame: J is not compatible with omega");
  CMat l = llt.matrixL();
  return UnitaryFrame{x * l};
}

SymplecticSpace symplectic_from_frame(const UnitaryFrame& frame) {
  const CMat& x = frame.columns;
  const CMat w = kI * (x * x.adjoint() - x.conjugate() * x.transpose());
  return make_symplectic(w.real());
}

FrameResidual frame_residual(const SymplecticSpace& space, const ComplexStructure& j,
                             const UnitaryFrame& frame) {
  const CMat& x = frame.columns;
  FrameResidual r;
  r.type = max_abs(j.dual().cast<cd>() * x - kI * x);
  const CMat w = kI * (x * x.adjoint() - x.conjugate() * x.transpose());
  r.form = max_abs(w - space.form.cast<cd>());
  return r;
}

Mat hermitian_pairing(const SymplecticSpace& space, const ComplexStructure& j) {
  return structure_metric(space, j);
}

Mat random_symplectic(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Mat s(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = a; b < 2 * n; ++b) s(a, b) = s(b, a) = nd(rng);
  const Mat w = standard_symplectic(n).form;
  return Mat((-w * s).exp());
}

ComplexStructure random_compatible(int n, std::mt19937_64& rng, double scale) {
  // P J0 P^{-1} = -P P^T omega for symplectic P; this form keeps omega J exactly symmetric.
  const Mat p = random_symplectic(n, rng, scale);
  const Mat w = standard_symplectic(n).form;
  return ComplexStructure(-(p * p.transpose()) * w);
}

}  // namespace pklab
