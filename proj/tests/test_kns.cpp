#include <doctest.h>

#include "pklab/kns.hpp"

using namespace pklab;

namespace {

CMat random_symmetric(int n, std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> nd;
  CMat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m(a, b) = m(b, a) = cd(nd(rng), nd(rng));
  Eigen::JacobiSVD<CMat> svd(m);
  return m * (radius / svd.singularValues()(0));
}

CMat scalar(cd v) {
  CMat m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("kns tensor of a structure against itself vanishes") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 4; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const auto f = adapted_frame(s, j);
    CHECK(max_abs(kns_tensor(j, j, f).phi) < 1e-12);
  }
}

TEST_CASE("n = 1 chart value 0.5 is recovered by both constructions") {
  const auto j0 = standard_complex_structure(1);
  const auto f = standard_frame(1);
  const auto jp = structure_from_bsd(j0, f, make_bsd_point(scalar(0.5)));
  CHECK(compatibility_report(standard_symplectic(1), jp).compatible);
  CHECK(std::abs(kns_tensor(j0, jp, f).phi(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(kns_tensor_by_projection(j0, jp, f)(0, 0) - 0.5) < 1e-12);
}

TEST_CASE("chart values are symmetric and inside the domain") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 4; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const auto f = adapted_frame(s, j);
    for (int i = 0; i < 25; ++i) {
      const auto jp = random_compatible(n, rng);
      const CMat phi = kns_tensor(j, jp, f).phi;
      CHECK(max_abs(phi - phi.transpose()) < 1e-10);
      // Eigenvalue oracle on Phi conj(Phi).
      Eigen::ComplexEigenSolver<CMat> es(phi * phi.conjugate());
      CHECK(es.eigenvalues().cwiseAbs().maxCoeff() < 1.0);
      CHECK(max_abs(phi - kns_tensor_by_projection(j, jp, f)) < 1e-10);
    }
  }
}

TEST_CASE("structure_from_bsd inverts the chart") {
  const auto j0 = standard_complex_structure(2);
  const auto f0 = standard_frame(2);
  CHECK(max_abs(structure_from_bsd(j0, f0, make_bsd_point(CMat::Zero(2, 2))).matrix() - j0.matrix()) < 1e-15);

  std::mt19937_64 rng(4);
  for (int n = 1; n <= 4; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const auto f = adapted_frame(s, j);
    for (int i = 0; i < 25; ++i) {
      const auto jp = random_compatible(n, rng);
      const auto back = structure_from_bsd(j, f, kns_tensor(j, jp, f));
      CHECK(max_abs(back.matrix() - jp.matrix()) < 1e-10);
      const auto point = make_bsd_point(random_symmetric(n, rng, 0.7));
      CHECK(max_abs(kns_tensor(j, structure_from_bsd(j, f, point), f).phi - point.phi) < 1e-10);
    }
  }
}

TEST_CASE("near-boundary points still give compatible structures") {
  std::mt19937_64 rng(6);
  for (int n = 1; n <= 3; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = standard_complex_structure(n);
    const auto f = standard_frame(n);
    const auto point = make_bsd_point(random_symmetric(n, rng, std::sqrt(0.999)));
    CHECK(domain_radius(point.phi) == doctest::Approx(0.999));
    CHECK(compatibility_report(s, structure_from_bsd(j, f, point)).compatible);
  }
}

TEST_CASE("domain guard") {
  CHECK_THROWS_AS(make_bsd_point(scalar(1.0)), DomainError);
  CMat nonsym(2, 2);
  nonsym << 0.1, 0.2, 0.0, 0.1;
  CHECK_THROWS_AS(make_bsd_point(nonsym), DomainError);
  const auto j0 = standard_complex_structure(1);
  CHECK_THROWS_AS(structure_from_bsd(j0, standard_frame(1), BsdPoint{scalar(1.2)}), DomainError);
}

TEST_CASE("Berndtsson tensor") {
  const CMat id = CMat::Identity(2, 2);
  CHECK(max_abs(berndtsson_tensor({id, CMat::Zero(2, 2)})) == 0.0);
  CHECK_THROWS_AS(berndtsson_tensor({CMat::Zero(2, 2), id}), AdmissibilityError);
  CHECK(std::abs(berndtsson_tensor({scalar(1.0), scalar(0.3)})(0, 0) - 0.3) < 1e-15);

  // Tensor invariance under complex-linear reparametrization z = S w.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 10; ++i) {
      CMat a(n, n), b(n, n), sm(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          a(p, q) = cd(nd(rng), nd(rng));
          b(p, q) = cd(nd(rng), nd(rng));
          sm(p, q) = cd(nd(rng), nd(rng));
        }
      const RealLinearMap t{a, b};
      const CMat lhs = berndtsson_tensor(compose_linear(t, sm));
      const CMat rhs = sm.inverse() * berndtsson_tensor(t) * sm.conjugate();
      CHECK(max_abs(lhs - rhs) < 1e-8 * (1.0 + max_abs(rhs)));
    }
  }
}

TEST_CASE("holomorphic motion") {
  CVec z(1);
  z << 1.0;
  const auto b = make_bsd_point(scalar(0.5));
  CHECK(std::abs(holomorphic_motion(b, z)(0) - 1.5) < 1e-15);
  CHECK(std::abs(inverse_motion(b, holomorphic_motion(b, z))(0) - 1.0) < 1e-15);

  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  for (int n = 1; n <= 3; ++n) {
    const auto zero = make_bsd_point(CMat::Zero(n, n));
    CVec zz(n);
    for (int a = 0; a < n; ++a) zz(a) = cd(nd(rng), nd(rng));
    CHECK(max_abs(holomorphic_motion(zero, zz) - zz) == 0.0);
    CHECK(motion_form_residual(zero, zz) < 1e-10);
    for (int i = 0; i < 5; ++i) {
      const auto p = make_bsd_point(random_symmetric(n, rng, 0.6));
      CHECK(max_abs(inverse_motion(p, holomorphic_motion(p, zz)) - zz) < 1e-12);
      CHECK(motion_form_residual(p, zz) < 1e-10);
    }
  }
}

TEST_CASE("motion Jacobian matches finite differences") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int n = 1; n <= 3; ++n) {
    const auto p = make_bsd_point(random_symmetric(n, rng, 0.6));
    CVec zz(n);
    for (int a = 0; a < n; ++a) zz(a) = cd(nd(rng), nd(rng));
    const auto jac = motion_jacobian(p, zz);
    const int nb = domain_dim(n);
    for (int c = 0; c < nb + n; ++c) {
      auto along = [&](cd dir) {
        return [&, dir](double s) {
          if (c < nb) return CVec(inverse_motion(BsdPoint{p.phi + s * dir * coordinate_unit(n, c)}, zz));
          CVec moved = zz;
          moved(c - nb) += s * dir;
          return CVec(inverse_motion(p, moved));
        };
      };
      const CVec dx = central_derivative(along(1.0), FdOptions{});
      const CVec dy = central_derivative(along(kI), FdOptions{});
      CHECK(max_abs(0.5 * (dx - kI * dy) - jac.holomorphic.col(c)) < 1e-8);
      CHECK(max_abs(0.5 * (dx + kI * dy) - jac.antiholomorphic.col(c)) < 1e-8);
    }
  }
}

TEST_CASE("the form residual detects (2,0) parts when B is not symmetric") {
  CMat b(2, 2);
  b << 0.1, 0.3, -0.2, 0.1;
  CVec z(2);
  z << cd(0.4, 0.1), cd(-0.3, 0.2);
  CHECK(motion_form_residual(BsdPoint{b}, z) > 1e-3);
}

TEST_CASE("holomorphy probe") {
  const auto j0 = standard_complex_structure(1);
  const auto f = standard_frame(1);
  const CMat d = scalar(cd(0.3, -0.2));
  CHECK(holomorphy_probe(j0, f, make_bsd_point(CMat::Zero(1, 1)), d) < 1e-10);
  CHECK(holomorphy_probe(j0, f, make_bsd_point(scalar(0.3)), d) < 1e-6);
  CHECK(holomorphy_probe(j0, f, make_bsd_point(scalar(0.3)), CMat::Zero(1, 1)) == 0.0);

  std::mt19937_64 rng(12);
  for (int n = 2; n <= 3; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const auto fr = adapted_frame(s, j);
    const auto base = make_bsd_point(random_symmetric(n, rng, 0.5));
    CHECK(holomorphy_probe(j, fr, base, random_symmetric(n, rng, 1.0)) < 1e-6);
  }
  CHECK_THROWS_AS(holomorphy_probe(j0, f, make_bsd_point(scalar(0.9999)), scalar(1.0), FdOptions{0.1, false}),
                  DomainError);
}

TEST_CASE("induced almost complex structure: V and V* conventions agree, mixed order flips sign") {
  // Along the chart curve s -> J(sD) the chart differential maps the tangent
  // to D.  Multiplying the tangent by J on the left (V convention), or by J on
  // the right of the covector-side tangent (V* convention, transposed back),
  // maps it to iD.  Right multiplication on the vector side gives -iD.
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 3; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const auto f = adapted_frame(s, j);
    const auto base = make_bsd_point(random_symmetric(n, rng, 0.4));
    const CMat d = random_symmetric(n, rng, 1.0);
    const auto jb = structure_from_bsd(j, f, base);
    const FdOptions fd;
    const Mat tangent = central_derivative(
        [&](double t) { return Mat(structure_from_bsd(j, f, BsdPoint{base.phi + t * d}).matrix()); }, fd);
    const CMat plain = chart_differential(j, f, jb, tangent);
    CHECK(max_abs(plain - d) < 1e-8);

    const Mat v_conv = jb.matrix() * tangent;
    const Mat covector_side = tangent.transpose() * jb.dual();  // A -> A J on V*
    const Mat vstar_conv = covector_side.transpose();
    CHECK(max_abs(v_conv - vstar_conv) < 1e-12);
    CHECK(max_abs(chart_differential(j, f, jb, v_conv) - kI * d) < 1e-7);
    CHECK(max_abs(chart_differential(j, f, jb, tangent * jb.matrix()) + kI * d) < 1e-7);
  }
}
