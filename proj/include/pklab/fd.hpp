#pragma once

// Central finite differences of vector- or matrix-valued functions.

#include <type_traits>

#include "pklab/types.hpp"

namespace pklab {

struct FdOptions {
  double step = 1e-3;
  // Richardson extrapolation of the central difference (fourth order).
  bool richardson = true;
};

// d/ds f(s) at s = 0.
template <class F>
auto central_derivative(const F& f, const FdOptions& o) {
  using R = std::decay_t<decltype(f(0.0))>;
  const double h = o.step;
  const R d1 = (f(h) - f(-h)) / (2.0 * h);
  if (!o.richardson) return d1;
  const R d2 = (f(2.0 * h) - f(-2.0 * h)) / (4.0 * h);
  return R((4.0 * d1 - d2) / 3.0);
}

// d^2/ds^2 f(s) at s = 0.
template <class F>
auto central_second(const F& f, const FdOptions& o) {
  using R = std::decay_t<decltype(f(0.0))>;
  const double h = o.step;
  const R f0 = f(0.0);
  const R s1 = (f(h) - 2.0 * f0 + f(-h)) / (h * h);
  if (!o.richardson) return s1;
  const R s2 = (f(2.0 * h) - 2.0 * f0 + f(-2.0 * h)) / (4.0 * h * h);
  return R((4.0 * s1 - s2) / 3.0);
}

// d^2/ds du f(s, u) at 0 (mixed partial).
template <class F>
auto central_mixed(const F& f, const FdOptions& o) {
  auto inner = [&](double s) {
    return central_derivative([&](double u) { return f(s, u); }, o);
  };
  return central_derivative(inner, o);
}

}  // namespace pklab
