#pragma once

// Hermitian-form geodesics, their Monge-Ampere characterization, the complex
// partial Legendre transform, and the log det convexity checks.

#include <functional>
#include <vector>

#include "pklab/types.hpp"

namespace pklab {

struct PathSample {
  CMat a, da, dda;  // A(t), A'(t), A''(t)
};
using HermitianPath = std::function<PathSample(double t)>;

// A'' - A' A^{-1} A'; zero exactly along geodesics.
CMat theta_tt(const HermitianPath& path, double t);
CMat theta_tt(const PathSample& s);

// A0^{1/2} (A0^{-1/2} A1 A0^{-1/2})^t A0^{1/2}, with eigenvalues clamped at 1e-14.
CMat hermitian_geodesic(const CMat& a0, const CMat& a1, double t);
// The same curve with analytic derivatives.
HermitianPath geodesic_path(const CMat& a0, const CMat& a1);
HermitianPath linear_path(const CMat& a0, const CMat& a1);

// Full complex Hessian of phi(t, z) = sum_jk A(Re t)_jk z_j conj(z_k) in
// (t, z_1..z_n) at one point; t is the first coordinate.
CMat hermitian_potential_hessian(const PathSample& s, const CVec& z);
// Real part of the determinant of a complex Hessian (it is real for Hermitian input).
double ma_determinant(const CMat& hessian);

// A -> A^{-1}: <A z, z> and <A^{-1} w, w> are partial Legendre duals.
CMat complex_legendre(const CMat& a);
// Pointwise transform of a path, derivatives included.
HermitianPath complex_legendre(const HermitianPath& path);

struct ConeBasis {
  std::vector<Mat> basis;  // symmetric n x n
  Vec point;               // A(point) = sum point_j basis_j, positive definite
  Mat matrix() const;
};
// Hessian of -log det A(t): Tr(A^{-1} A_j A^{-1} A_k).
Mat bm_hessian(const ConeBasis& cone);
// Basis of all real symmetric n x n matrices (E_aa and E_ab + E_ba).
std::vector<Mat> symmetric_basis(int n);

// Quadratic potentials u_t(x) = x^T M(t) x with M linear in t over a box P.
// rho(t) = (-log det M(t))_tt does not depend on x.
struct MabuchiProfile {
  std::vector<double> t, rho, integral;  // integral = vol(P) rho
  double min_rho = 0.0;
  bool degenerate = false;               // rho vanishes identically
  double min_log_second_difference = 0.0;  // of log integral on interior samples
  double best_constant = 0.0;              // min (log rho)_tt / rho on interior samples
};
MabuchiProfile mabuchi_profile(const Mat& m0, const Mat& m1, const Vec& half_widths, const std::vector<double>& t);

}  // namespace pklab
