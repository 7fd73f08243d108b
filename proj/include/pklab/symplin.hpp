#pragma once

// Linear symplectic and complex structures on R^{2n}.
//
// Covectors are stored as coefficient columns in the dual basis e^1..e^{2n}.
// A linear map J of V acts on covectors by u -> u o J, which on coefficient
// columns is the matrix J^T.  A covector u has type (1,0) for J when
// u o J = i u.

#include <random>

#include "pklab/types.hpp"

namespace pklab {

struct SymplecticSpace {
  int n = 0;
  Mat form;  // omega(u, v) = u^T form v
};

// Validates antisymmetry and nondegeneracy.
SymplecticSpace make_symplectic(Mat form);
SymplecticSpace standard_symplectic(int n);

class ComplexStructure {
 public:
  // Throws unless J^2 = -I to within 1e-12 relative to |J|^2.
  explicit ComplexStructure(Mat j);
  const Mat& matrix() const { return j_; }
  int n() const { return static_cast<int>(j_.rows() / 2); }
  // Action on covector coefficient columns.
  Mat dual() const { return j_.transpose(); }

 private:
  Mat j_;
};

ComplexStructure standard_complex_structure(int n);

struct CompatibilityReport {
  bool compatible = false;
  Mat metric;  // g(u, v) = omega(u, J v)
  double min_eigenvalue = 0.0;
};

CompatibilityReport compatibility_report(const SymplecticSpace& space, const ComplexStructure& j);

struct TypeProjectors {
  CMat p10;  // (1 - iJ)/2 on covectors
  CMat p01;  // (1 + iJ)/2 on covectors
};

TypeProjectors type_projectors(const ComplexStructure& j);

// n covectors of type (1,0), orthonormal in the sense omega = i sum xi^j ^ conj(xi^j).
struct UnitaryFrame {
  CMat columns;  // 2n x n
  int n() const { return static_cast<int>(columns.cols()); }
};

// xi^j = (e^j + i e^{n+j}) / sqrt(2), adapted to the standard structure.
UnitaryFrame standard_frame(int n);

// An orthonormal (1,0) frame for any compatible J.
UnitaryFrame adapted_frame(const SymplecticSpace& space, const ComplexStructure& j);

// The symplectic form i sum xi^j ^ conj(xi^j) encoded by a frame.
SymplecticSpace symplectic_from_frame(const UnitaryFrame& frame);

struct FrameResidual {
  double type = 0.0;   // max |xi J - i xi|
  double form = 0.0;   // max |omega - i sum xi ^ conj(xi)|
};

FrameResidual frame_residual(const SymplecticSpace& space, const ComplexStructure& j,
                             const UnitaryFrame& frame);

// Hermitian pairing <V, W> = omega(V, J conj(W)) on complexified vectors, as
// a matrix H with <V, W> = V^T H conj(W).
Mat hermitian_pairing(const SymplecticSpace& space, const ComplexStructure& j);

// Exponential of a random Hamiltonian A = -omega S,
// with S symmetric of entry scale `scale`.
Mat random_symplectic(int n, std::mt19937_64& rng, double scale = 0.3);

// P J0 P^{-1} for a random symplectic P; compatible with the standard form.
ComplexStructure random_compatible(int n, std::mt19937_64& rng, double scale = 0.3);

// Metric g = omega J of a compatible structure and its inverse (the metric on covectors).
Mat structure_metric(const SymplecticSpace& space, const ComplexStructure& j);

}  // namespace pklab
