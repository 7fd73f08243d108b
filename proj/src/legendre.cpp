#include "pklab/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace pklab {

double ConvexGrid::operator()(double x) const {
  const double h = step();
  if (x < lo - 1e-12 * h || x > hi + 1e-12 * h) throw DomainError("ConvexGrid: point outside the box");
  const int i = std::clamp(static_cast<int>(std::floor((x - lo) / h)), 0, size() - 2);
  const double s = (x - node(i)) / h;
  return (1.0 - s) * values(i) + s * values(i + 1);
}

ConvexGrid ConvexGrid::sample(double lo, double hi, int n, const std::function<double(double)>& f) {
  if (n < 3 || !(hi > lo)) throw ConfigError("ConvexGrid: need at least 3 nodes on a nonempty box");
  ConvexGrid g{lo, hi, Vec(n)};
  for (int i = 0; i < n; ++i) g.values(i) = f(g.node(i));
  return g;
}

void ConvexGrid::require_convex(double tol) const {
  if (size() < 3) throw DimensionError("ConvexGrid: need at least 3 nodes");
  const double scale = std::max(1.0, max_abs(values));
  for (int i = 1; i + 1 < size(); ++i)
    if (values(i - 1) - 2.0 * values(i) + values(i + 1) < -tol * scale)
      throw ConvexityError("ConvexGrid: samples are not convex at node " + std::to_string(i));
}

void write_csv(std::ostream& out, const ConvexGrid& g) {
  out.precision(17);
  out << "dimensions,1\nbox," << g.lo << ',' << g.hi << "\nvalues";
  for (int i = 0; i < g.size(); ++i) out << ',' << g.values(i);
  out << '\n';
}

ConvexGrid read_convex_grid_csv(std::istream& in) {
  auto fields = [&](const char* key) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("convex grid csv: missing line " + std::string(key));
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (cell != key) throw ConfigError("convex grid csv: expected " + std::string(key));
    std::vector<double> out;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
  };
  const auto dims = fields("dimensions");
  if (dims.size() != 1 || dims[0] != 1.0) throw CaseNotCoveredError("convex grid csv: one-dimensional grids only");
  const auto box = fields("box");
  const auto vals = fields("values");
  if (box.size() != 2 || vals.size() < 3) throw ConfigError("convex grid csv: malformed box or values");
  ConvexGrid g{box[0], box[1], Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()))};
  return g;
}

Vec legendre_at(const ConvexGrid& g, const Vec& ys) {
  g.require_convex();
  const int n = g.size();
  Vec out(ys.size());
  int i = 0;
  for (int k = 0; k < ys.size(); ++k) {
    if (k > 0 && ys(k) < ys(k - 1)) throw DomainError("legendre_at: slopes must be sorted");
    // The maximizer of x_i y - phi_i moves right while the next secant slope is below y.
    while (i + 1 < n && (g.values(i + 1) - g.values(i)) / g.step() < ys(k)) ++i;
    out(k) = g.node(i) * ys(k) - g.values(i);
  }
  return out;
}

namespace {

Interval secant_range(const ConvexGrid& g) {
  const double h = g.step();
  return {(g.values(1) - g.values(0)) / h, (g.values(g.size() - 1) - g.values(g.size() - 2)) / h};
}

Vec uniform(double lo, double hi, int n) { return Vec::LinSpaced(n, lo, hi); }

}  // namespace

ConvexGrid real_legendre(const ConvexGrid& g) {
  g.require_convex();
  const Interval r = secant_range(g);
  if (!(r.hi > r.lo)) throw ConvexityError("real_legendre: input is affine; the dual domain is a point");
  return ConvexGrid{r.lo, r.hi, legendre_at(g, uniform(r.lo, r.hi, g.size()))};
}

ConvexGrid convex_geodesic(const ConvexGrid& phi0, const ConvexGrid& phi1, double t) {
  phi0.require_convex();
  phi1.require_convex();
  const Interval r0 = secant_range(phi0), r1 = secant_range(phi1);
  const double lo = std::max(r0.lo, r1.lo), hi = std::min(r0.hi, r1.hi);
  if (!(hi > lo)) throw DomainError("convex_geodesic: gradient images do not overlap");
  const int n = std::max(phi0.size(), phi1.size());
  const Vec ys = uniform(lo, hi, n);
  const ConvexGrid dual{lo, hi, t * legendre_at(phi1, ys) + (1.0 - t) * legendre_at(phi0, ys)};
  return real_legendre(dual);
}

double quadratic_geodesic(double a0, double a1, double t, double x) {
  if (a0 <= 0.0 || a1 <= 0.0) throw ConvexityError("quadratic_geodesic: coefficients must be positive");
  return x * x / (t / a1 + (1.0 - t) / a0);
}

double discrete_ma(const std::function<double(double, double)>& psi, double t, double x, double h) {
  const double c = psi(t, x);
  const double tt = (psi(t + h, x) - 2.0 * c + psi(t - h, x)) / (h * h);
  const double xx = (psi(t, x + h) - 2.0 * c + psi(t, x - h)) / (h * h);
  const double tx = (psi(t + h, x + h) - psi(t + h, x - h) - psi(t - h, x + h) + psi(t - h, x - h)) / (4.0 * h * h);
  return tt * xx - tx * tx;
}

double dual_second_difference(const ConvexGrid& before, const ConvexGrid& mid, const ConvexGrid& after, double h,
                              const Vec& ys) {
  const Vec d = (legendre_at(after, ys) - 2.0 * legendre_at(mid, ys) + legendre_at(before, ys)) / (h * h);
  return max_abs(d);
}

Interval gradient_interval(const ConvexGrid& g) {
  Interval r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 1; i + 1 < g.size(); ++i) {
    const double d = (g.values(i + 1) - g.values(i - 1)) / (2.0 * g.step());
    r.lo = std::min(r.lo, d);
    r.hi = std::max(r.hi, d);
  }
  return r;
}

ImageProbe gradient_image_probe(const ConvexGrid& g, int pairs, std::mt19937_64& rng) {
  g.require_convex();
  std::uniform_int_distribution<int> pick(1, g.size() - 2);
  auto gradient = [&](int i) { return (g.values(i + 1) - g.values(i - 1)) / (2.0 * g.step()); };
  ImageProbe p;
  for (int k = 0; k < pairs; ++k) {
    const double y = 0.5 * (gradient(pick(rng)) + gradient(pick(rng)));
    int arg = 0;
    for (int i = 1; i < g.size(); ++i)
      if (g.values(i) - g.node(i) * y < g.values(arg) - g.node(arg) * y) arg = i;
    ++p.pairs;
    if (arg == 0 || arg == g.size() - 1)
      ++p.inconclusive;
    else
      ++p.inside;
  }
  return p;
}

}  // namespace pklab
