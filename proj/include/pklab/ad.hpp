#pragma once

// Nested forward-mode dual numbers over std::complex<double>.
//
// A real-analytic function written with the operations below can be fed
// complex seed directions; the mixed part of a depth-k evaluation is then the
// k-th directional derivative along those (complexified) directions.  Wirtinger
// derivatives are directional derivatives along (1/2, -i/2) and (1/2, i/2) in
// the (Re, Im) coordinates of one complex variable.

#include <cmath>
#include <complex>
#include <functional>
#include <initializer_list>
#include <span>
#include <type_traits>
#include <vector>

#include "pklab/types.hpp"

namespace pklab {

template <class T>
struct Dual {
  T v{};
  T d{};
};

template <class S>
concept Scalar = std::is_arithmetic_v<S> || std::is_same_v<S, cd>;

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <class T, Scalar S>
Dual<T> operator+(const Dual<T>& a, S s) { return {a.v + s, a.d}; }
template <class T, Scalar S>
Dual<T> operator+(S s, const Dual<T>& a) { return {a.v + s, a.d}; }
template <class T, Scalar S>
Dual<T> operator-(const Dual<T>& a, S s) { return {a.v - s, a.d}; }
template <class T, Scalar S>
Dual<T> operator-(S s, const Dual<T>& a) { return {s - a.v, -a.d}; }
template <class T, Scalar S>
Dual<T> operator*(const Dual<T>& a, S s) { return {a.v * s, a.d * s}; }
template <class T, Scalar S>
Dual<T> operator*(S s, const Dual<T>& a) { return {a.v * s, a.d * s}; }
template <class T, Scalar S>
Dual<T> operator/(const Dual<T>& a, S s) { return {a.v / s, a.d / s}; }
template <class T, Scalar S>
Dual<T> operator/(S s, const Dual<T>& a) {
  T q = s / a.v;
  return {q, -(q * a.d) / a.v};
}

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { return a = a + b; }
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { return a = a - b; }
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { return a = a * b; }

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(sin(a.v) * a.d)};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T r = sqrt(a.v);
  return {r, a.d / (r * 2.0)};
}

using D1 = Dual<cd>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

namespace ad_detail {

template <class T>
struct depth : std::integral_constant<int, 0> {};
template <class T>
struct depth<Dual<T>> : std::integral_constant<int, depth<T>::value + 1> {};

template <class T>
T constant(cd c) {
  if constexpr (std::is_same_v<T, cd>) {
    return c;
  } else {
    return T{constant<decltype(T::v)>(c), constant<decltype(T::v)>(0.0)};
  }
}

// x + sum_l eps_l * dirs[l], with eps_l the infinitesimal of nesting level l.
template <class T>
T seed(double x, std::span<const cd> dirs) {
  if constexpr (std::is_same_v<T, cd>) {
    return cd(x);
  } else {
    using Inner = decltype(T::v);
    const auto k = dirs.size();
    return T{seed<Inner>(x, dirs.first(k - 1)), constant<Inner>(dirs[k - 1])};
  }
}

template <class T>
cd mixed_part(const T& t) {
  if constexpr (std::is_same_v<T, cd>) {
    return t;
  } else {
    return mixed_part(t.d);
  }
}

}  // namespace ad_detail

// One complex coordinate derivative: d/dz_index or d/dzbar_index.
struct Wirt {
  int index;
  bool bar;
};

// Real-coordinate direction vector of a Wirtinger derivative.  Real
// coordinates are interleaved: x[2a] = Re z_a, x[2a+1] = Im z_a.
inline CVec wirtinger_direction(int real_dim, Wirt w) {
  CVec d = CVec::Zero(real_dim);
  d(2 * w.index) = 0.5;
  d(2 * w.index + 1) = w.bar ? cd(0.0, 0.5) : cd(0.0, -0.5);
  return d;
}

// A real scalar field on R^d that can be evaluated on nested duals up to
// depth 4.  Build with make() from a generic lambda taking std::span<const T>.
class ScalarField {
 public:
  template <class F>
  static ScalarField make(F f) {
    ScalarField s;
    s.f0_ = [f](std::span<const cd> x) { return cd(f(x)); };
    s.f1_ = [f](std::span<const D1> x) { return D1(f(x)); };
    s.f2_ = [f](std::span<const D2> x) { return D2(f(x)); };
    s.f3_ = [f](std::span<const D3> x) { return D3(f(x)); };
    s.f4_ = [f](std::span<const D4> x) { return D4(f(x)); };
    return s;
  }

  bool valid() const { return static_cast<bool>(f0_); }

  double value(const Vec& x) const {
    std::vector<cd> in(x.data(), x.data() + x.size());
    return f0_(in).real();
  }

  // Directional derivative along the given complex directions (0 to 4 of them).
  cd derivative(const Vec& x, std::span<const CVec> dirs) const;

  // Mixed Wirtinger derivative, e.g. {{0,false},{1,true}} is d^2/dz_0 dzbar_1.
  cd wirtinger(const Vec& x, std::initializer_list<Wirt> ws) const;

 private:
  template <class T, class Fn>
  cd eval(const Fn& fn, const Vec& x, std::span<const CVec> dirs) const {
    std::vector<T> in(x.size());
    std::vector<cd> comp(dirs.size());
    for (Eigen::Index r = 0; r < x.size(); ++r) {
      for (std::size_t l = 0; l < dirs.size(); ++l) comp[l] = dirs[l](r);
      in[r] = ad_detail::seed<T>(x(r), comp);
    }
    return ad_detail::mixed_part(fn(in));
  }

  std::function<cd(std::span<const cd>)> f0_;
  std::function<D1(std::span<const D1>)> f1_;
  std::function<D2(std::span<const D2>)> f2_;
  std::function<D3(std::span<const D3>)> f3_;
  std::function<D4(std::span<const D4>)> f4_;
};

inline cd ScalarField::derivative(const Vec& x, std::span<const CVec> dirs) const {
  switch (dirs.size()) {
    case 0: return eval<cd>(f0_, x, dirs);
    case 1: return eval<D1>(f1_, x, dirs);
    case 2: return eval<D2>(f2_, x, dirs);
    case 3: return eval<D3>(f3_, x, dirs);
    case 4: return eval<D4>(f4_, x, dirs);
    default: throw DimensionError("ScalarField: at most four derivatives");
  }
}

inline cd ScalarField::wirtinger(const Vec& x, std::initializer_list<Wirt> ws) const {
  std::vector<CVec> dirs;
  dirs.reserve(ws.size());
  for (const auto& w : ws) dirs.push_back(wirtinger_direction(static_cast<int>(x.size()), w));
  return derivative(x, dirs);
}

// A complex matrix-valued field on R^d (row-major entries), depth up to 2.
class MatrixField {
 public:
  template <class F>
  static MatrixField make(int rows, int cols, F f) {
    MatrixField s;
    s.rows_ = rows;
    s.cols_ = cols;
    s.f0_ = [f](std::span<const cd> x) { return f(x); };
    s.f1_ = [f](std::span<const D1> x) { return f(x); };
    s.f2_ = [f](std::span<const D2> x) { return f(x); };
    return s;
  }

  bool valid() const { return static_cast<bool>(f0_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  CMat derivative(const Vec& x, std::span<const CVec> dirs) const;
  CMat value(const Vec& x) const { return derivative(x, {}); }
  CMat wirtinger(const Vec& x, std::initializer_list<Wirt> ws) const;

 private:
  template <class T, class Fn>
  CMat eval(const Fn& fn, const Vec& x, std::span<const CVec> dirs) const {
    std::vector<T> in(x.size());
    std::vector<cd> comp(dirs.size());
    for (Eigen::Index r = 0; r < x.size(); ++r) {
      for (std::size_t l = 0; l < dirs.size(); ++l) comp[l] = dirs[l](r);
      in[r] = ad_detail::seed<T>(x(r), comp);
    }
    auto out = fn(in);
    require_dims(static_cast<int>(out.size()) == rows_ * cols_, "MatrixField: wrong entry count");
    CMat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = ad_detail::mixed_part(out[i * cols_ + j]);
    return m;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::function<std::vector<cd>(std::span<const cd>)> f0_;
  std::function<std::vector<D1>(std::span<const D1>)> f1_;
  std::function<std::vector<D2>(std::span<const D2>)> f2_;
};

inline CMat MatrixField::derivative(const Vec& x, std::span<const CVec> dirs) const {
  switch (dirs.size()) {
    case 0: return eval<cd>(f0_, x, dirs);
    case 1: return eval<D1>(f1_, x, dirs);
    case 2: return eval<D2>(f2_, x, dirs);
    default: throw DimensionError("MatrixField: at most two derivatives");
  }
}

inline CMat MatrixField::wirtinger(const Vec& x, std::initializer_list<Wirt> ws) const {
  std::vector<CVec> dirs;
  for (const auto& w : ws) dirs.push_back(wirtinger_direction(static_cast<int>(x.size()), w));
  return derivative(x, dirs);
}

}  // namespace pklab
