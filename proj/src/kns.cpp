#include "pklab/kns.hpp"

#include "pklab/ad.hpp"

#include <cmath>

namespace pklab {

double domain_radius(const CMat& phi) {
  if (phi.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMat> es(phi * phi.conjugate(), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

BsdPoint make_bsd_point(CMat phi) {
  require_dims(phi.rows() == phi.cols() && phi.rows() > 0, "BsdPoint: square nonempty matrix required");
  if (max_abs(phi - phi.transpose()) > 1e-10) throw DomainError("BsdPoint: matrix is not symmetric");
  if (domain_radius(phi) >= 1.0 - kBoundaryMargin) throw DomainError("BsdPoint: outside the domain");
  return BsdPoint{std::move(phi)};
}

int domain_dim(int n) { return n * (n + 1) / 2; }

CVec to_coords(const CMat& phi) {
  const int n = static_cast<int>(phi.rows());
  CVec t(domain_dim(n));
  int j = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) t(j++) = phi(a, b);
  return t;
}

CMat from_coords(const CVec& t, int n) {
  require_dims(t.size() == domain_dim(n), "from_coords: wrong coordinate count");
  CMat phi(n, n);
  int j = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) phi(a, b) = phi(b, a) = t(j++);
  return phi;
}

CMat coordinate_unit(int n, int j) {
  CVec t = CVec::Zero(domain_dim(n));
  t(j) = 1.0;
  return from_coords(t, n);
}

namespace {

CMat frame_basis(const UnitaryFrame& frame) {
  const CMat& x = frame.columns;
  CMat y(x.rows(), 2 * x.cols());
  y << x, x.conjugate();
  return y;
}

void check_frame(const ComplexStructure& j, const UnitaryFrame& frame) {
  require_dims(frame.columns.rows() == j.matrix().rows() && frame.n() == j.n(),
               "frame does not match the structure's dimension");
}

}  // namespace

BsdPoint kns_tensor(const ComplexStructure& j, const ComplexStructure& jp, const UnitaryFrame& frame) {
  check_frame(j, frame);
  require_dims(jp.matrix().rows() == j.matrix().rows(), "kns_tensor: dimension mismatch");
  const int n = j.n();
  const Mat k = j.dual();
  const Mat kp = jp.dual();
  const Mat id = Mat::Identity(2 * n, 2 * n);
  Eigen::FullPivLU<Mat> lu(id - k * kp);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) throw DomainError("kns_tensor: 1 - JJ' is singular");
  const Mat cayley = (id + k * kp) * lu.inverse();
  const CMat coeff = frame_basis(frame).partialPivLu().solve(cayley.cast<cd>() * frame.columns);
  return make_bsd_point(coeff.bottomRows(n));
}

CMat kns_tensor_by_projection(const ComplexStructure& j, const ComplexStructure& jp,
                              const UnitaryFrame& frame) {
  check_frame(j, frame);
  const int n = j.n();
  // Basis of the (1,0) covectors of J' from the column space of its projector.
  const CMat p = type_projectors(jp).p10;
  Eigen::ColPivHouseholderQR<CMat> qr(p);
  const CMat zp = qr.householderQ() * CMat::Identity(2 * n, n);
  CMat system(2 * n, 2 * n);
  system << zp, frame.columns.conjugate();
  const CMat parts = system.partialPivLu().solve(frame.columns);
  return -parts.bottomRows(n);
}

CMat graph_frame(const UnitaryFrame& frame, const CMat& phi) {
  return frame.columns + frame.columns.conjugate() * phi;
}

ComplexStructure structure_from_bsd(const ComplexStructure& j, const UnitaryFrame& frame,
                                    const BsdPoint& point) {
  check_frame(j, frame);
  require_dims(point.n() == j.n(), "structure_from_bsd: dimension mismatch");
  make_bsd_point(point.phi);
  const int n = j.n();
  const CMat z = graph_frame(frame, point.phi);
  CMat y(2 * n, 2 * n);
  y << z, z.conjugate();
  CVec diag(2 * n);
  diag.head(n).setConstant(kI);
  diag.tail(n).setConstant(-kI);
  const CMat kp = y * diag.asDiagonal() * y.partialPivLu().inverse();
  return ComplexStructure(kp.real().transpose());
}

CMat berndtsson_tensor(const RealLinearMap& t, double tol) {
  const auto& a = t.linear_part;
  require_dims(a.rows() == a.cols() && t.antilinear_part.rows() == a.rows() &&
                   t.antilinear_part.cols() == a.cols(),
               "berndtsson_tensor: shape mismatch");
  Eigen::JacobiSVD<CMat> svd(a);
  const auto& s = svd.singularValues();
  const double scale = std::max({1.0, s.size() ? s(0) : 0.0, t.antilinear_part.norm()});
  if (s.size() == 0 || s(s.size() - 1) <= tol * scale)
    throw AdmissibilityError("berndtsson_tensor: linear part is not invertible");
  return a.partialPivLu().solve(t.antilinear_part);
}

RealLinearMap compose_linear(const RealLinearMap& t, const CMat& s) {
  return RealLinearMap{t.linear_part * s, t.antilinear_part * s.conjugate()};
}

CVec holomorphic_motion(const BsdPoint& point, const CVec& z) {
  require_dims(z.size() == point.n(), "holomorphic_motion: dimension mismatch");
  return z + point.phi * z.conjugate();
}

CVec inverse_motion(const BsdPoint& point, const CVec& zeta) {
  require_dims(zeta.size() == point.n(), "inverse_motion: dimension mismatch");
  const int n = point.n();
  const CMat m = CMat::Identity(n, n) - point.phi * point.phi.conjugate();
  return m.partialPivLu().solve(zeta - point.phi * zeta.conjugate());
}

MotionJacobian motion_jacobian(const BsdPoint& point, const CVec& zeta) {
  const int n = point.n();
  const int nb = domain_dim(n);
  const CMat& b = point.phi;
  const CMat m = CMat::Identity(n, n) - b * b.conjugate();
  const Eigen::PartialPivLU<CMat> lu(m);
  const CVec z = lu.solve(zeta - b * zeta.conjugate());
  // Differentiating M z = zeta - B conj(zeta) with M = 1 - B conj(B):
  // M dz = -dB (conj(zeta) - conj(B) z) + B conj(dB) z + dzeta - B conj(dzeta).
  const CVec w = zeta.conjugate() - b.conjugate() * z;
  MotionJacobian jac{CMat(n, nb + n), CMat(n, nb + n)};
  for (int c = 0; c < nb; ++c) {
    const CMat e = coordinate_unit(n, c);
    jac.holomorphic.col(c) = -lu.solve(e * w);
    jac.antiholomorphic.col(c) = lu.solve(b * e * z);
  }
  const CMat minv = lu.inverse();
  jac.holomorphic.rightCols(n) = minv;
  jac.antiholomorphic.rightCols(n) = -minv * b;
  return jac;
}

double motion_form_residual(const BsdPoint& point, const CVec& zeta) {
  require_dims(zeta.size() == point.n(), "motion_form_residual: dimension mismatch");
  const MotionJacobian jac = motion_jacobian(point, zeta);
  // For holomorphic coordinate vectors u, v: i ddbar|z|^2 (u, v) = i (dz(u).dzbar(v) - dz(v).dzbar(u)),
  // with dzbar(u) = conj of the antiholomorphic derivative.
  const CMat p = jac.holomorphic;
  const CMat q = jac.antiholomorphic.conjugate();
  const CMat pairing = kI * (p.transpose() * q - q.transpose() * p);
  return max_abs(pairing);
}

BsdPoint displaced(const BsdPoint& p, const CMat& d, double s) {
  CMat phi = p.phi + s * d;
  if (domain_radius(phi) >= 1.0 - kBoundaryMargin)
    throw DomainError("finite-difference stencil leaves the domain");
  return BsdPoint{phi};
}

BsdPoint displaced(const BsdPoint& p, int coord, cd dir, double s) {
  return displaced(p, dir * coordinate_unit(p.n(), coord), s);
}

double holomorphy_probe(const ComplexStructure& j, const UnitaryFrame& frame, const BsdPoint& base,
                        const CMat& direction, const FdOptions& fd) {
  require_dims(direction.rows() == base.n() && direction.cols() == base.n(),
               "holomorphy_probe: direction shape mismatch");
  if (max_abs(direction - direction.transpose()) > 1e-12)
    throw DomainError("holomorphy_probe: direction must be symmetric");
  const double dnorm = direction.norm();
  if (dnorm == 0.0) return 0.0;
  const SymplecticSpace space = symplectic_from_frame(frame);
  const ComplexStructure j2 = structure_from_bsd(j, frame, base);
  const UnitaryFrame frame2 = adapted_frame(space, j2);
  auto transition = [&](const CMat& d) {
    return [&, d](double s) {
      return CMat(kns_tensor(j2, structure_from_bsd(j, frame, displaced(base, d, s)), frame2).phi);
    };
  };
  const CMat real_dir = central_derivative(transition(direction), fd);
  const CMat imag_dir = central_derivative(transition(kI * direction), fd);
  return (imag_dir - kI * real_dir).norm() / (2.0 * dnorm);
}

CMat chart_differential(const ComplexStructure& j, const UnitaryFrame& frame,
                        const ComplexStructure& at, const Mat& tangent, const FdOptions& fd) {
  const int n = j.n();
  const Mat k = j.dual();
  const Mat id = Mat::Identity(2 * n, 2 * n);
  const CMat y = frame_basis(frame);
  auto chart = [&](double s) {
    // The Cayley expression is smooth in J', so it can be differentiated off
    // the submanifold J'^2 = -1.
    const Mat kp = (at.matrix() + s * tangent).transpose();
    const Mat cayley = (id + k * kp) * (id - k * kp).inverse();
    const CMat coeff = y.partialPivLu().solve(cayley.cast<cd>() * frame.columns);
    return CMat(coeff.bottomRows(n));
  };
  return central_derivative(chart, fd);
}

}  // namespace pklab
