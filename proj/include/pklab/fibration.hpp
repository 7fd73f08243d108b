#pragma once

// Relative Kahler fibrations given by a potential in product coordinates
// (t, zeta) in C^m x C^n, optionally with torus fibers C^n / lattice(t).
//
// All pointwise quantities come from exact (automatic) derivatives of the
// potential; fiber operators on tori are Fourier-spectral.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pklab/ad.hpp"
#include "pklab/fd.hpp"
#include "pklab/spectral.hpp"

namespace pklab {

struct FibrationModel {
  std::string name;
  int m = 1;  // base dimension
  int n = 1;  // fiber dimension
  // Real potential of the real coordinates (Re t^1, Im t^1, ..., Re zeta^n, Im zeta^n).
  ScalarField potential;
  // Complex n x 2n matrix whose columns generate the fiber lattice at t; empty
  // for models without compact fibers.
  std::function<CMat(const CVec& t)> lattice;
  int grid = 64;

  bool proper() const { return static_cast<bool>(lattice); }
  int dim() const { return m + n; }
  Vec real_point(const CVec& t, const CVec& zeta) const;
};

// Coefficients H(a, b) = d^2 phi / dw^a dconj(w^b) of omega = i sum H dw^a ^ dconj(w^b), w = (t, zeta).
CMat complex_hessian(const FibrationModel& model, const Vec& x);
// Derivative of complex_hessian along a complex real-coordinate direction.
CMat complex_hessian_derivative(const FibrationModel& model, const Vec& x, const CVec& direction);

// Sum coeffs(a) d/dw^a, or sum coeffs(a) d/dconj(w^a), as a real-coordinate direction.
CVec holomorphic_direction(int dim, const CVec& coeffs);
CVec antiholomorphic_direction(int dim, const CVec& coeffs);

// Geometry at one point of the total space.
struct PointGeometry {
  CMat hessian;     // (m + n) x (m + n)
  CMat fiber;       // g_{alpha betabar}
  CMat fiber_inv;
  CMat lifts;       // m x n, row j: V_j = d/dt^j + sum lifts(j, alpha) d/dzeta^alpha
  CMat c;           // geodesic curvatures c_{j kbar}
  std::vector<CMat> ks;  // ks[j](alpha, beta) = dbar_beta of lifts(j, alpha)
};
PointGeometry point_geometry(const FibrationModel& model, const CVec& t, const CVec& zeta);

// <kappa_j, kappa_k> at a point.
cd ks_pairing(const PointGeometry& g, int j, int k);
// Full coefficient matrix of ddbar log det(fiber metric), the curvature of the
// relative canonical bundle with the metric induced by omega.
CMat canonical_curvature(const FibrationModel& model, const Vec& x);
// The same form evaluated on (U, conj W) for complex directions U, W in w-coordinates.
cd canonical_curvature(const FibrationModel& model, const Vec& x, const CVec& u, const CVec& w);

// Grid data on the fiber over t (torus models only).
struct FiberState {
  FibrationModel model;
  CVec t;
  TorusGrid grid;
  std::vector<Vec> points;  // real coordinates of the total space
  std::vector<PointGeometry> geometry;
  CVec volume_density;      // det(fiber) 2^n, so that omega_t^n / n! = density dx dy
  // Grid array of a pointwise quantity.
  template <class F>
  CVec collect(F f) const {
    CVec out(static_cast<Eigen::Index>(geometry.size()));
    for (std::size_t i = 0; i < geometry.size(); ++i) out(static_cast<Eigen::Index>(i)) = f(geometry[i], i);
    return out;
  }
};
FiberState fiber_state(const FibrationModel& model, const CVec& t);

// Max over the fiber grid of |dbar_gamma A_{beta} - dbar_beta A_{gamma}| for all KS arrays.
double ks_closedness(const FiberState& state);

struct PkResidual {
  double omega_power = 0.0;  // max |(n+1)-minors of the coefficient matrix|
  double c_sup = 0.0;        // max |c_{j kbar}|
};
PkResidual pk_residual(const FibrationModel& model, std::span<const CVec> ts, std::span<const CVec> zetas);
// Torus models: all grid points of each fiber.
PkResidual pk_residual(const FibrationModel& model, std::span<const CVec> ts);

// m x m matrix of fiber integrals of <kappa_j, kappa_k> omega_t^n / n!.
CMat wp_fiber_metric(const FibrationModel& model, const CVec& t);
CMat wp_fiber_metric(const FiberState& state);

struct SchumacherReport {
  CVec lhs;    // canonical curvature on (V_j, conj V_k)
  CVec inner;  // <kappa_j, kappa_k>
  CVec box_c;  // box c_{j kbar}
  double residual = 0.0;
  double nyquist = 0.0;  // high-mode energy fraction of the fiber metric and of c
};
// Throws ResolutionError when the high-mode energy fraction exceeds 1e-20, i.e.
// relative amplitudes near the grid cutoff are above 1e-10.
SchumacherReport schumacher_residual(const FiberState& state, int j, int k);
SchumacherReport schumacher_residual(const FibrationModel& model, const CVec& t, int j, int k);

// Base dimension 1: the DF metric as the fiber integral of the canonical
// curvature wedged with omega^n / n! plus the fiber scalar curvature times omega^{n+1} / (n+1)!.
struct FujikiSchumacher {
  cd wp = 0.0;
  cd canonical_term = 0.0;
  cd scalar_term = 0.0;
  double residual() const { return std::abs(wp - canonical_term - scalar_term); }
};
FujikiSchumacher fujiki_schumacher(const FiberState& state);

// |kappa^phi| and |box phi| for a fiber function on a torus fiber with a flat metric.
struct BochnerReport {
  double kappa_norm = 0.0;
  double box_norm = 0.0;
  double ks_pairing = 0.0;  // max_j |<kappa_j, kappa^phi>|
  std::string fiber_case = "flat";
};
BochnerReport bkn_identity_check(const FiberState& state, const CVec& phi);

// Horizontal lift identities at a point, from exact third derivatives.
struct BracketReport {
  double holomorphic = 0.0;  // max |[V_j, V_k]|
  double contraction = 0.0;  // max |[V_j, conj V_k] -| omega|_fiber - i dc_{j kbar}|_fiber|
  double fiber_dc = 0.0;     // max |dc_{j kbar}|_fiber|, zero iff the bracket vanishes
};
BracketReport bracket_check(const FibrationModel& model, const CVec& t, const CVec& zeta);

// Real 2-form of omega' = omega - i sum c_{j kbar} dt^j ^ dconj(t^k) at a point,
// in interleaved real coordinates.
Mat omega_prime(const FibrationModel& model, const Vec& x);
// Max |d omega'| component at x by central differences.
double d_omega_prime(const FibrationModel& model, const Vec& x, const FdOptions& fd = {});

}  // namespace pklab
