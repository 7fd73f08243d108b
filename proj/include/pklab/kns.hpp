#pragma once

// Coordinates on the compatible complex structures of (R^{2n}, omega): the
// space of symmetric complex n x n matrices Phi with rho(Phi conj(Phi)) < 1.

#include <utility>

#include "pklab/fd.hpp"
#include "pklab/symplin.hpp"

namespace pklab {

inline constexpr double kBoundaryMargin = 1e-12;

struct BsdPoint {
  CMat phi;
  int n() const { return static_cast<int>(phi.rows()); }
};

// Spectral radius of Phi conj(Phi).
double domain_radius(const CMat& phi);

// Throws DomainError unless Phi is symmetric (1e-10) with radius < 1 - 1e-12.
BsdPoint make_bsd_point(CMat phi);

// p + s d, or p + s dir dPhi/dt^coord; DomainError if the result leaves the domain.
BsdPoint displaced(const BsdPoint& p, const CMat& d, double s);
BsdPoint displaced(const BsdPoint& p, int coord, cd dir, double s);

// Wirtinger derivatives (d/dt^coord, d/dconj(t^coord)) of a matrix-valued map of the point.
template <class F>
std::pair<CMat, CMat> wirtinger_fd(const F& f, const BsdPoint& p, int coord, const FdOptions& fd) {
  const CMat dx = central_derivative([&](double s) { return CMat(f(displaced(p, coord, 1.0, s))); }, fd);
  const CMat dy = central_derivative([&](double s) { return CMat(f(displaced(p, coord, kI, s))); }, fd);
  return {0.5 * (dx - kI * dy), 0.5 * (dx + kI * dy)};
}

// Domain coordinates t^j: the entries Phi_ab with a <= b, row-major.
int domain_dim(int n);
CVec to_coords(const CMat& phi);
CMat from_coords(const CVec& t, int n);
// dPhi/dt^j: the symmetric unit matrix of coordinate j.
CMat coordinate_unit(int n, int j);

// Matrix of (1 + J J')(1 - J J')^{-1} on the (1,0) covectors of J, in the
// frame: Phi(xi^k) = sum_j phi(j, k) conj(xi^j).
BsdPoint kns_tensor(const ComplexStructure& j, const ComplexStructure& jp, const UnitaryFrame& frame);

// The same tensor obtained by splitting each xi^k along
// (1,0)_{J'} + (0,1)_J and reading off minus the (0,1)_J part.
CMat kns_tensor_by_projection(const ComplexStructure& j, const ComplexStructure& jp,
                              const UnitaryFrame& frame);

// J' whose (1,0) covectors are spanned by xi^k + sum_j phi(j,k) conj(xi^j).
ComplexStructure structure_from_bsd(const ComplexStructure& j, const UnitaryFrame& frame,
                                    const BsdPoint& point);

// Basis [xi^k + sum_j phi(j,k) conj(xi^j)]_k of the (1,0) covectors of J(point).
CMat graph_frame(const UnitaryFrame& frame, const CMat& phi);

struct RealLinearMap {
  CMat linear_part;      // T1(z) = A z
  CMat antilinear_part;  // T2(z) = B conj(z)
};

CMat berndtsson_tensor(const RealLinearMap& t, double tol = 1e-12);
// Composition T o S for complex-linear S.
RealLinearMap compose_linear(const RealLinearMap& t, const CMat& s);

// zeta = z + B conj(z) and its inverse z = (1 - B conj(B))^{-1}(zeta - B conj(zeta)).
CVec holomorphic_motion(const BsdPoint& point, const CVec& z);
CVec inverse_motion(const BsdPoint& point, const CVec& zeta);

// Derivatives of the inverse motion z(B, zeta) with respect to the complex
// coordinates (B_ab for a <= b in row-major order, then zeta_j) and their conjugates.
struct MotionJacobian {
  CMat holomorphic;      // dz / d coords
  CMat antiholomorphic;  // dz / d conj(coords)
};
MotionJacobian motion_jacobian(const BsdPoint& point, const CVec& zeta);

// Max |Omega(d_a, d_b)| over holomorphic coordinate vector pairs (B_jk, zeta_j)
// at (point, zeta), where Omega pulls back i ddbar |z|^2 along the inverse motion.
double motion_form_residual(const BsdPoint& point, const CVec& zeta);

// Cauchy-Riemann residual |dT(iD) - i dT(D)| / (2|D|) of the chart transition
// T from the chart of (J, frame) to the chart centred at structure_from_bsd(base),
// evaluated at base.  Tangent vectors are covector-side (A -> A J on V*).
double holomorphy_probe(const ComplexStructure& j, const UnitaryFrame& frame, const BsdPoint& base,
                        const CMat& direction, const FdOptions& fd = {});

// Derivative of the chart map J' -> Phi(J'; J) along a tangent W in End(V),
// taken at J' = at.  Used to compare the two conventions for the induced
// almost complex structure on the space of structures.
CMat chart_differential(const ComplexStructure& j, const UnitaryFrame& frame,
                        const ComplexStructure& at, const Mat& tangent, const FdOptions& fd = {});

}  // namespace pklab
