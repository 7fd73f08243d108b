#pragma once

// Periodic grids on flat tori C^n / lattice and Fourier-spectral calculus.

#include <vector>

#include "pklab/types.hpp"

namespace pklab {

// Torus R^{2n} / P Z^{2n} sampled at P (i / N) for i in {0..N-1}^{2n}.  Real
// coordinates are interleaved (x_1, y_1, x_2, y_2, ...); the columns of P are
// the real period vectors.
class TorusGrid {
 public:
  TorusGrid(Mat periods, int points_per_axis);

  int real_dim() const { return static_cast<int>(periods_.rows()); }
  int complex_dim() const { return real_dim() / 2; }
  int points_per_axis() const { return n_; }
  int size() const { return size_; }
  const Mat& periods() const { return periods_; }
  double volume() const { return volume_; }

  // Real coordinates of grid point idx (last axis fastest).
  Vec point(int idx) const;

  // Wirtinger derivative d/dzeta_alpha (bar = false) or d/dconj(zeta_alpha) of grid data.
  CVec wirtinger(const CVec& f, int alpha, bool bar) const;
  // d^2 f / dzeta_alpha dconj(zeta_beta).
  CVec mixed(const CVec& f, int alpha, int beta) const;

  // Trapezoid rule (spectrally accurate for smooth periodic data) of f dx dy.
  cd integrate(const CVec& f) const;

  // Energy fraction of f in modes with some |k_i| > N / 3.  The denominator is
  // at least reference, a mean-square scale for data that may be near zero.
  double high_mode_fraction(const CVec& f, double reference = 0.0) const;

 private:
  CVec forward(const CVec& f) const;
  CVec backward(const CVec& fhat) const;
  // d/dx_r of f in real coordinates.
  CVec real_derivative(const CVec& f, int r) const;

  Mat periods_;
  Mat inverse_;
  int n_;
  int size_;
  double volume_;
  std::vector<int> shape_;
};

}  // namespace pklab
