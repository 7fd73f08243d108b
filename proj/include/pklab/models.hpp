#pragma once

// Built-in fibration models.  Torus models have fiber dimension 1.

#include "pklab/fibration.hpp"

namespace pklab {

// |zeta|^2 + w |t|^2 on C x C/<1, i>; Poisson-Kahler exactly when w = 0.
FibrationModel product_model(double base_weight = 0.0);

// Elliptic curves C/<1, t> over the upper half plane with the flat form pulled
// back from C/<1, i>; potential 2 (Im zeta)^2 / Im t.
FibrationModel elliptic_model(int grid = 64);

// (Im zeta)^2 / Im t + eps Im t cos(2 pi u), u the lattice coordinate along 1
// (zeta = u + v t).  Lattice compatible; not Poisson-Kahler for eps != 0.
FibrationModel perturbed_torus_model(double eps = 0.02, int grid = 64);

// |zeta + h(t)|^2 with h(t) = 0.3 t^2 on C x C/<1, i>.
FibrationModel holomorphic_shift_model();

// |zeta|^2 + |t|^2 + 0.2 |zeta|^2 |t|^2 (no compact fibers).
FibrationModel quartic_perturbation_model();

// sum A(Re t)_{jk} z^j conj(z^k) along the Hermitian geodesic from a0 to a1.
FibrationModel hermitian_geodesic_model(const CMat& a0, const CMat& a1);
// The same along the straight segment (1 - Re t) a0 + Re t a1.
FibrationModel hermitian_linear_model(const CMat& a0, const CMat& a1);

// Base C^2, fiber C: |zeta|^2 + 2 Re(conj(zeta) h(t)) + psi(t) with
// h = t1 t2 + t1^2 / 2 and psi = |t|^2 + 0.1 |t1|^4; c is constant on fibers.
FibrationModel fiber_constant_model();

// The closed-form slice of the elliptic family over one t.
struct EllipticSlice {
  cd t;
  cd a;  // f(zeta) = a zeta + b conj(zeta), f(1) = 1, f(t) = i
  cd b;
  cd map(cd zeta) const { return a * zeta + b * std::conj(zeta); }
  // Coefficients of the pullback of i dw ^ dconj(w) in (t, zeta): the (1,1)
  // part and the (2,0) part (the latter vanishes).
  CMat pullback(cd zeta) const;
  cd pullback_20(cd zeta) const;
};
EllipticSlice elliptic_family(cd t);

}  // namespace pklab
