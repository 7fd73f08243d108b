#include "pklab/models.hpp"

#include <numbers>

namespace pklab {

namespace {

CMat square_lattice(const CVec&) {
  CMat l(1, 2);
  l << 1.0, kI;
  return l;
}

CMat modular_lattice(const CVec& t) {
  if (t(0).imag() <= 0.0) throw DomainError("lattice <1, t> needs Im t > 0");
  CMat l(1, 2);
  l << 1.0, t(0);
  return l;
}

// Hermitian form sum A_{jk} z^j conj(z^k) where A(s) = sum_i w_i(s) m_i m_i^H.
template <class T, class W>
T hermitian_form(std::span<const T> x, const CMat& mcols, W weight) {
  const int n = static_cast<int>(mcols.rows());
  T sum = x[0] * 0.0;
  for (int i = 0; i < mcols.cols(); ++i) {
    // |m_i^T z|^2 with z = x[2 + 2a] + i x[3 + 2a].
    T re = x[0] * 0.0, im = x[0] * 0.0;
    for (int a = 0; a < n; ++a) {
      const cd c = mcols(a, i);
      re = re + x[2 + 2 * a] * c.real() - x[3 + 2 * a] * c.imag();
      im = im + x[2 + 2 * a] * c.imag() + x[3 + 2 * a] * c.real();
    }
    sum = sum + weight(x[0], i) * (re * re + im * im);
  }
  return sum;
}

}  // namespace

FibrationModel product_model(double w) {
  FibrationModel f;
  f.name = w == 0.0 ? "product" : "product-with-base";
  f.potential = ScalarField::make([w](auto x) { return x[2] * x[2] + x[3] * x[3] + w * (x[0] * x[0] + x[1] * x[1]); });
  f.lattice = square_lattice;
  return f;
}

FibrationModel elliptic_model(int grid) {
  FibrationModel f;
  f.name = "elliptic";
  f.potential = ScalarField::make([](auto x) { return 2.0 * x[3] * x[3] / x[1]; });
  f.lattice = modular_lattice;
  f.grid = grid;
  return f;
}

FibrationModel perturbed_torus_model(double eps, int grid) {
  FibrationModel f;
  f.name = "perturbed-torus";
  f.potential = ScalarField::make([eps](auto x) {
    using std::cos;
    const auto u = x[2] - x[3] * x[0] / x[1];
    return x[3] * x[3] / x[1] + eps * x[1] * cos(2.0 * std::numbers::pi * u);
  });
  f.lattice = modular_lattice;
  f.grid = grid;
  return f;
}

FibrationModel holomorphic_shift_model() {
  FibrationModel f;
  f.name = "holomorphic-shift";
  f.potential = ScalarField::make([](auto x) {
    // zeta + 0.3 t^2
    const auto re = x[2] + 0.3 * (x[0] * x[0] - x[1] * x[1]);
    const auto im = x[3] + 0.6 * x[0] * x[1];
    return re * re + im * im;
  });
  f.lattice = square_lattice;
  return f;
}

FibrationModel quartic_perturbation_model() {
  FibrationModel f;
  f.name = "quartic-perturbation";
  f.potential = ScalarField::make([](auto x) {
    const auto z2 = x[2] * x[2] + x[3] * x[3];
    const auto t2 = x[0] * x[0] + x[1] * x[1];
    return z2 + t2 + 0.2 * z2 * t2;
  });
  return f;
}

FibrationModel hermitian_geodesic_model(const CMat& a0, const CMat& a1) {
  // A(s) = a0^{1/2} Q diag(lambda^s) Q^H a0^{1/2} with Q, lambda from a0^{-1/2} a1 a0^{-1/2}.
  Eigen::SelfAdjointEigenSolver<CMat> e0(a0);
  if (e0.eigenvalues().minCoeff() <= 0.0) throw PositivityError("hermitian_geodesic_model: a0 not positive definite");
  const CMat half = e0.operatorSqrt();
  const CMat ihalf = e0.operatorInverseSqrt();
  Eigen::SelfAdjointEigenSolver<CMat> e1(ihalf * a1 * ihalf);
  if (e1.eigenvalues().minCoeff() <= 0.0) throw PositivityError("hermitian_geodesic_model: a1 not positive definite");
  const CMat mcols = half * e1.eigenvectors();
  const Eigen::VectorXd loglam = e1.eigenvalues().array().log();
  FibrationModel f;
  f.name = "hermitian-geodesic";
  f.n = static_cast<int>(a0.rows());
  f.potential = ScalarField::make([mcols, loglam](auto x) {
    using std::exp;
    return hermitian_form(x, mcols, [&](const auto& s, int i) { return exp(s * loglam(i)); });
  });
  return f;
}

FibrationModel hermitian_linear_model(const CMat& a0, const CMat& a1) {
  // (1 - s) a0 + s a1 = sum over the columns of both square roots.
  Eigen::SelfAdjointEigenSolver<CMat> e0(a0), e1(a1);
  const int n = static_cast<int>(a0.rows());
  CMat mcols(n, 2 * n);
  mcols << e0.operatorSqrt(), e1.operatorSqrt();
  FibrationModel f;
  f.name = "hermitian-linear";
  f.n = n;
  f.potential = ScalarField::make([mcols, n](auto x) {
    return hermitian_form(x, mcols, [n](const auto& s, int i) { return i < n ? 1.0 - s : s; });
  });
  return f;
}

FibrationModel fiber_constant_model() {
  FibrationModel f;
  f.name = "fiber-constant";
  f.m = 2;
  f.n = 1;
  f.potential = ScalarField::make([](auto x) {
    // t1 = x0 + i x1, t2 = x2 + i x3, zeta = x4 + i x5.
    const auto hre = x[0] * x[2] - x[1] * x[3] + 0.5 * (x[0] * x[0] - x[1] * x[1]);
    const auto him = x[0] * x[3] + x[1] * x[2] + x[0] * x[1];
    const auto t1 = x[0] * x[0] + x[1] * x[1];
    const auto t2 = x[2] * x[2] + x[3] * x[3];
    return x[4] * x[4] + x[5] * x[5] + 2.0 * (x[4] * hre + x[5] * him) + t1 + t2 + 0.1 * t1 * t1;
  });
  return f;
}

EllipticSlice elliptic_family(cd t) {
  if (t.imag() <= 0.0) throw DomainError("elliptic_family: Im t must be positive");
  const cd diff = t - std::conj(t);
  return EllipticSlice{t, (kI - std::conj(t)) / diff, (t - kI) / diff};
}

CMat EllipticSlice::pullback(cd zeta) const {
  const double s = t.imag();
  const double y = zeta.imag();
  // dw = alpha . (dt, dzeta) + conj(gamma) . (dconj t, dconj zeta).
  CVec alpha(2), gamma(2);
  alpha << -a * y / s, a;
  gamma << std::conj(-b * y / s), std::conj(b);
  return alpha * alpha.adjoint() - gamma * gamma.adjoint();
}

cd EllipticSlice::pullback_20(cd zeta) const {
  const double s = t.imag();
  const double y = zeta.imag();
  // i dw^{1,0} ^ dconj(w)^{(0,1) conj}: proportional to alpha_t beta_z - alpha_z beta_t.
  return kI * ((-a * y / s) * b - a * (-b * y / s));
}

}  // namespace pklab
