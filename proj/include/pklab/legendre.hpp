#pragma once

// Real Legendre transforms on uniform one-dimensional grids, convex-function
// geodesics (linear interpolation of the duals), and gradient-image probes.

#include <functional>
#include <iosfwd>
#include <random>

#include "pklab/types.hpp"

namespace pklab {

struct ConvexGrid {
  double lo = 0.0, hi = 1.0;
  Vec values;  // samples at lo + i h, h = (hi - lo) / (N - 1)

  int size() const { return static_cast<int>(values.size()); }
  double step() const { return (hi - lo) / (size() - 1); }
  double node(int i) const { return lo + i * step(); }
  // Piecewise-linear interpolation; x outside [lo, hi] is a DomainError.
  double operator()(double x) const;

  static ConvexGrid sample(double lo, double hi, int n, const std::function<double(double)>& f);
  // Throws ConvexityError unless all second differences are >= -tol * scale.
  void require_convex(double tol = 1e-12) const;
};

// CSV: "dimensions,1" / "box,lo,hi" / "values,v0,v1,...".
void write_csv(std::ostream& out, const ConvexGrid& g);
ConvexGrid read_convex_grid_csv(std::istream& in);

// sup_x (x y - phi(x)) of the piecewise-linear interpolant at sorted points ys,
// by a single monotone scan.
Vec legendre_at(const ConvexGrid& g, const Vec& ys);
// Transform sampled on N uniform points spanning the secant slopes of g.
ConvexGrid real_legendre(const ConvexGrid& g);

// (t phi1* + (1 - t) phi0*)*, the duals taken on the common slope range.
ConvexGrid convex_geodesic(const ConvexGrid& phi0, const ConvexGrid& phi1, double t);

// Closed form for phi_i = a_i x^2: x^2 / (t / a1 + (1 - t) / a0).
double quadratic_geodesic(double a0, double a1, double t, double x);

// psi_tt psi_xx - psi_tx^2 by central second differences of step h.
double discrete_ma(const std::function<double(double, double)>& psi, double t, double x, double h);

// Max over the given slopes of the second t-difference of the dual of a path
// of grids sampled at t - h, t, t + h.
double dual_second_difference(const ConvexGrid& before, const ConvexGrid& mid, const ConvexGrid& after, double h,
                              const Vec& ys);

struct ImageProbe {
  int pairs = 0;
  int inside = 0;
  int inconclusive = 0;  // minimum of phi - x y attained on the boundary
};
// Samples central-difference gradients, and tests midpoints of random pairs.
ImageProbe gradient_image_probe(const ConvexGrid& g, int pairs, std::mt19937_64& rng);

struct Interval {
  double lo = 0.0, hi = 0.0;
};
// Range of the central-difference gradient over interior nodes.
Interval gradient_interval(const ConvexGrid& g);

}  // namespace pklab
