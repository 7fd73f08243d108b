#include <doctest.h>

#include "pklab/symplin.hpp"

using namespace pklab;

TEST_CASE("standard symplectic form") {
  const auto s1 = standard_symplectic(1);
  Mat expect(2, 2);
  expect << 0, 1, -1, 0;
  CHECK(max_abs(s1.form - expect) == 0.0);

  const auto s2 = standard_symplectic(2);
  CHECK(max_abs(s2.form + s2.form.transpose()) == 0.0);
  CHECK(s2.form(0, 2) == 1.0);
  CHECK(s2.form(1, 3) == 1.0);
  CHECK(s2.form(0, 1) == 0.0);
  for (int n = 1; n <= 5; ++n) CHECK(standard_symplectic(n).form.determinant() == doctest::Approx(1.0));
  CHECK_THROWS_AS(standard_symplectic(0), DimensionError);
}

TEST_CASE("invalid forms and structures are rejected") {
  Mat notanti(2, 2);
  notanti << 0, 1, 1, 0;
  CHECK_THROWS_AS(make_symplectic(notanti), DomainError);
  CHECK_THROWS_AS(make_symplectic(Mat::Zero(2, 2)), DomainError);
  CHECK_THROWS_AS(ComplexStructure(Mat::Identity(2, 2)), DomainError);
  CHECK_THROWS_AS(ComplexStructure(Mat::Identity(3, 3)), DimensionError);
}

TEST_CASE("compatibility of the standard structure and its negative") {
  const auto s = standard_symplectic(1);
  const auto j0 = standard_complex_structure(1);
  Mat expect(2, 2);
  expect << 0, -1, 1, 0;
  CHECK(max_abs(j0.matrix() - expect) == 0.0);
  const auto r = compatibility_report(s, j0);
  CHECK(r.compatible);
  CHECK(max_abs(r.metric - Mat::Identity(2, 2)) == 0.0);

  const auto rn = compatibility_report(s, ComplexStructure(-j0.matrix()));
  CHECK_FALSE(rn.compatible);
  CHECK(max_abs(rn.metric + Mat::Identity(2, 2)) == 0.0);

  CHECK_THROWS_AS(compatibility_report(standard_symplectic(2), j0), DimensionError);
}

TEST_CASE("random conjugates of J0 by symplectic matrices are compatible") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 4; ++n) {
    const auto s = standard_symplectic(n);
    for (int i = 0; i < 20; ++i) {
      const Mat p = random_symplectic(n, rng);
      CHECK(max_abs(p.transpose() * s.form * p - s.form) < 1e-12);
      const auto j = random_compatible(n, rng);
      const auto r = compatibility_report(s, j);
      CHECK(r.compatible);
      // Eigenvalue oracle: the symmetrized metric has positive spectrum.
      Eigen::SelfAdjointEigenSolver<Mat> es(r.metric);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("type projectors") {
  const auto j0 = standard_complex_structure(1);
  const auto pr = type_projectors(j0);
  CVec dz(2), dzbar(2);
  dz << 1.0, kI;
  dzbar << 1.0, -kI;
  CHECK(max_abs(pr.p10 * dz - dz) < 1e-15);
  CHECK(max_abs(pr.p10 * dzbar) < 1e-15);

  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    const auto j = random_compatible(n, rng);
    const auto p = type_projectors(j);
    const double scale = j.matrix().norm();
    CHECK(max_abs(p.p10 * p.p10 - p.p10) < 1e-12 * scale * scale);
    CHECK(max_abs(p.p01 * p.p01 - p.p01) < 1e-12 * scale * scale);
    CHECK(max_abs(p.p10 + p.p01 - CMat::Identity(2 * n, 2 * n)) == 0.0);
    // Singular-value oracle for the rank.
    Eigen::JacobiSVD<CMat> svd(p.p10);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-8 * sv(0);
    CHECK(rank == n);
  }
}

TEST_CASE("unitary frames") {
  for (int n = 1; n <= 4; ++n) {
    const auto s = standard_symplectic(n);
    const auto f = standard_frame(n);
    const auto r = frame_residual(s, standard_complex_structure(n), f);
    CHECK(r.type < 1e-15);
    CHECK(r.form < 1e-15);
    CHECK(max_abs(symplectic_from_frame(f).form - s.form) < 1e-15);
  }
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 4; ++n) {
    const auto s = standard_symplectic(n);
    for (int i = 0; i < 10; ++i) {
      const auto j = random_compatible(n, rng);
      const auto f = adapted_frame(s, j);
      const auto r = frame_residual(s, j, f);
      CHECK(r.type < 1e-12);
      CHECK(r.form < 1e-12);
    }
  }
  CHECK_THROWS_AS(adapted_frame(standard_symplectic(1), ComplexStructure(-standard_complex_structure(1).matrix())),
                  PositivityError);
}

TEST_CASE("Hermitian pairing is conjugate-symmetric and positive on (1,0) vectors") {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 3; ++n) {
    const auto s = standard_symplectic(n);
    const auto j = random_compatible(n, rng);
    const CMat h = hermitian_pairing(s, j).cast<cd>();
    // (1,0) vectors: J v = i v.
    const CMat pv = 0.5 * (CMat::Identity(2 * n, 2 * n) - kI * j.matrix().cast<cd>());
    std::normal_distribution<double> nd;
    for (int i = 0; i < 10; ++i) {
      CVec a(2 * n), b(2 * n);
      for (int r = 0; r < 2 * n; ++r) {
        a(r) = cd(nd(rng), nd(rng));
        b(r) = cd(nd(rng), nd(rng));
      }
      const cd ab = (a.transpose() * h * b.conjugate())(0, 0);
      const cd ba = (b.transpose() * h * a.conjugate())(0, 0);
      CHECK(std::abs(ab - std::conj(ba)) < 1e-10 * (1 + std::abs(ab)));
      const CVec v = pv * a;
      CHECK((v.transpose() * h * v.conjugate())(0, 0).real() > 0.0);
    }
  }
}

TEST_CASE("opposite type spaces of two compatible structures meet only in zero") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 10; ++i) {
      const auto j = random_compatible(n, rng);
      const auto jp = random_compatible(n, rng);
      const auto s = standard_symplectic(n);
      const CMat a = adapted_frame(s, jp).columns;
      const CMat b = adapted_frame(s, j).columns.conjugate();
      CMat stacked(2 * n, 2 * n);
      stacked << a, b;
      Eigen::JacobiSVD<CMat> svd(stacked);
      CHECK(svd.singularValues().minCoeff() > 1e-8);
    }
  }
}
