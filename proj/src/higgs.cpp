#include "pklab/higgs.hpp"

#include <algorithm>

#include <unsupported/Eigen/MatrixFunctions>

namespace pklab {

namespace {

struct PointData {
  CMat z;      // (1,0) covectors at the point, 2n x n
  CMat yinv;   // [z, conj z]^{-1}
  CMat p10;
  Mat covector_metric;
};

PointData point_data(const HiggsBundle& b, const BsdPoint& point) {
  const int n = point.n();
  PointData d;
  d.z = graph_frame(b.frame, point.phi);
  CMat y(2 * n, 2 * n);
  y << d.z, d.z.conjugate();
  d.yinv = y.partialPivLu().inverse();
  d.p10 = d.z * d.yinv.topRows(n);
  const ComplexStructure jt = structure_from_bsd(b.j, b.frame, point);
  d.covector_metric = structure_metric(b.space, jt).inverse();
  d.covector_metric = 0.5 * (d.covector_metric + d.covector_metric.transpose()).eval();
  return d;
}

std::pair<int, int> type_range(int n, int k) { return {std::max(0, k - n), std::min(k, n)}; }

// Frame sections: wedges of columns of [z, conj z], with their (p,q) type.
struct Sections {
  CMat columns;
  std::vector<int> holomorphic_degree;
};

Sections frame_sections(const HiggsBundle& b, const BsdPoint& point) {
  const int n = point.n();
  const CMat z = graph_frame(b.frame, point.phi);
  CMat w(2 * n, 2 * n);
  w << z, z.conjugate();
  const ExteriorBasis basis(2 * n, b.k);
  Sections s{CMat(basis.size(), basis.size()), {}};
  for (int i = 0; i < basis.size(); ++i) {
    const auto idx = basis.indices(i);
    CMat vs(2 * n, b.k);
    int p = 0;
    for (int c = 0; c < b.k; ++c) {
      vs.col(c) = w.col(idx[c]);
      p += idx[c] < n;
    }
    s.columns.col(i) = wedge(vs);
    s.holomorphic_degree.push_back(p);
  }
  return s;
}

CMat stacked_projectors(const HiggsBundle& b, const BsdPoint& p) {
  const HiggsFrame f = higgs_frame(b, p);
  const int r = f.rank();
  CMat out(r * (b.k + 1), r);
  for (int q = 0; q <= b.k; ++q) out.middleRows(q * r, r) = f.proj[q];
  return out;
}

CMat comm(const CMat& a, const CMat& b) { return a * b - b * a; }

}  // namespace

CMat HiggsFrame::adjoint(const CMat& a) const { return gram.partialPivLu().solve(a.adjoint() * gram); }

HiggsFrame higgs_frame(const HiggsBundle& b, const BsdPoint& basepoint) {
  const int n = basepoint.n();
  require_dims(b.j.n() == n && b.frame.n() == n && b.space.n == n, "higgs_frame: dimension mismatch");
  if (b.k < 0 || b.k > 2 * n) throw DimensionError("higgs_frame: degree out of range");
  const PointData d = point_data(b, basepoint);
  HiggsFrame f;
  f.k = b.k;
  f.basepoint = basepoint;
  f.gram = compound(d.covector_metric.cast<cd>(), b.k);
  const int r = f.rank();
  const CMat number = derivation_extension(d.p10, b.k);
  const auto [lo, hi] = type_range(n, b.k);
  f.proj.assign(b.k + 1, CMat::Zero(r, r));
  for (int p = lo; p <= hi; ++p) {
    CMat pr = CMat::Identity(r, r);
    for (int q = lo; q <= hi; ++q)
      if (q != p) pr = pr * (number - double(q) * CMat::Identity(r, r)) / double(p - q);
    f.proj[p] = pr;
  }
  const CMat p01 = CMat::Identity(2 * n, 2 * n) - d.p10;
  const CMat xbar = b.frame.columns.conjugate();
  const CMat top = d.yinv.topRows(n);
  for (int c = 0; c < domain_dim(n); ++c) {
    const CMat on_one = p01 * xbar * coordinate_unit(n, c) * top;
    f.theta.push_back(derivation_extension(on_one, b.k));
  }
  return f;
}

HiggsFrame higgs_frame(const SymplecticSpace& space, const ComplexStructure& j, const UnitaryFrame& frame,
                       const BsdPoint& basepoint, int k) {
  return higgs_frame(HiggsBundle{space, j, frame, k}, basepoint);
}

AlgebraicReport algebraic_check(const HiggsFrame& f) {
  AlgebraicReport rep;
  const int r = f.rank();
  CMat sum = CMat::Zero(r, r);
  for (std::size_t p = 0; p < f.proj.size(); ++p) {
    sum += f.proj[p];
    for (std::size_t q = 0; q < f.proj.size(); ++q)
      if (p != q) rep.partition = std::max(rep.partition, max_abs(f.proj[p] * f.proj[q]));
  }
  rep.partition = std::max(rep.partition, max_abs(sum - CMat::Identity(r, r)));
  for (const CMat& t : f.theta) {
    for (std::size_t p = 0; p < f.proj.size(); ++p) {
      const CMat image = t * f.proj[p];
      const CMat target = p == 0 ? CMat::Zero(r, r) : CMat(f.proj[p - 1] * image);
      rep.theta_type = std::max(rep.theta_type, max_abs(image - target));
    }
    for (const CMat& u : f.theta) rep.theta_square = std::max(rep.theta_square, max_abs(comm(t, u)));
  }
  rep.adjoint = adjoint_check(f);
  return rep;
}

double adjoint_check(const HiggsFrame& f) {
  double worst = 0.0;
  for (const CMat& t : f.theta) worst = std::max(worst, max_abs(f.adjoint(t) - t.conjugate()));
  return worst;
}

ConnectionData connection_data(const HiggsBundle& b, const BsdPoint& basepoint, const FdOptions& fd) {
  ConnectionData d{higgs_frame(b, basepoint), {}, {}, {}, {}};
  const int r = d.frame.rank();
  const int nb = domain_dim(basepoint.n());
  for (int c = 0; c < nb; ++c) {
    const auto [dz, dzbar] = wirtinger_fd([&](const BsdPoint& p) { return stacked_projectors(b, p); }, basepoint,
                                          c, fd);
    std::vector<CMat> hol, anti;
    CMat a = CMat::Zero(r, r), abar = CMat::Zero(r, r);
    for (int q = 0; q <= b.k; ++q) {
      hol.push_back(dz.middleRows(q * r, r));
      anti.push_back(dzbar.middleRows(q * r, r));
      a += d.frame.proj[q] * hol.back();
      abar += d.frame.proj[q] * anti.back();
    }
    d.dproj.push_back(std::move(hol));
    d.dbarproj.push_back(std::move(anti));
    d.a.push_back(a);
    d.abar.push_back(abar);
  }
  return d;
}

double connection_split_check(const HiggsBundle& b, const BsdPoint& basepoint, const FdOptions& fd) {
  const HiggsFrame f = higgs_frame(b, basepoint);
  const Sections s0 = frame_sections(b, basepoint);
  double worst = 0.0;
  for (int c = 0; c < domain_dim(basepoint.n()); ++c) {
    const auto [ds, dbars] = wirtinger_fd([&](const BsdPoint& p) { return frame_sections(b, p).columns; },
                                          basepoint, c, fd);
    for (int i = 0; i < s0.columns.cols(); ++i) {
      const CMat& pr = f.proj[s0.holomorphic_degree[i]];
      const CVec hol = ds.col(i) - pr * ds.col(i) - f.theta[c] * s0.columns.col(i);
      const CVec anti = dbars.col(i) - pr * dbars.col(i) - f.theta[c].conjugate() * s0.columns.col(i);
      worst = std::max({worst, max_abs(hol), max_abs(anti)});
    }
  }
  return worst;
}

double metric_compatibility_check(const HiggsBundle& b, const BsdPoint& basepoint, const FdOptions& fd) {
  const HiggsFrame f = higgs_frame(b, basepoint);
  const Sections s0 = frame_sections(b, basepoint);
  const CMat& s = s0.columns;
  auto pairing = [&](const BsdPoint& p) {
    const CMat sp = frame_sections(b, p).columns;
    return CMat(sp.adjoint() * higgs_frame(b, p).gram * sp);
  };
  // D applied columnwise: type-projected derivative of each pure-type section.
  auto project = [&](const CMat& deriv) {
    CMat out(deriv.rows(), deriv.cols());
    for (int i = 0; i < deriv.cols(); ++i) out.col(i) = f.proj[s0.holomorphic_degree[i]] * deriv.col(i);
    return out;
  };
  double worst = 0.0;
  for (int c = 0; c < domain_dim(basepoint.n()); ++c) {
    const auto [ds, dbars] = wirtinger_fd([&](const BsdPoint& p) { return frame_sections(b, p).columns; },
                                          basepoint, c, fd);
    const auto [dpair, unused] = wirtinger_fd(pairing, basepoint, c, fd);
    (void)unused;
    const CMat expected = project(dbars).adjoint() * f.gram * s + s.adjoint() * f.gram * project(ds);
    worst = std::max(worst, max_abs(dpair - expected));
  }
  return worst;
}

double theta_holomorphicity_check(const HiggsBundle& b, const BsdPoint& basepoint, const FdOptions& fd) {
  const ConnectionData d = connection_data(b, basepoint, fd);
  const int nb = domain_dim(basepoint.n());
  double worst = 0.0;
  for (int j = 0; j < nb; ++j) {
    for (int c = 0; c < nb; ++c) {
      const auto [dt, dbart] = wirtinger_fd([&](const BsdPoint& p) { return higgs_frame(b, p).theta[j]; },
                                            basepoint, c, fd);
      (void)dt;
      worst = std::max(worst, max_abs(dbart + comm(d.abar[c], d.frame.theta[j])));
    }
  }
  return worst;
}

CMat curvature_operator(const ConnectionData& d, int j, int k) {
  // [d_j + A_j, dbar_k + Abar_k] with A = sum pi d pi reduces to first derivatives of pi.
  CMat out = comm(d.a[j], d.abar[k]);
  for (std::size_t p = 0; p < d.dproj[j].size(); ++p) out += comm(d.dproj[j][p], d.dbarproj[k][p]);
  return out;
}

CMat curvature_operator(const HiggsBundle& b, const BsdPoint& basepoint, int j, int k, const FdOptions& fd) {
  return curvature_operator(connection_data(b, basepoint, fd), j, k);
}

double curvature_identity_check(const HiggsBundle& b, const BsdPoint& basepoint, const FdOptions& fd) {
  const ConnectionData d = connection_data(b, basepoint, fd);
  const int nb = domain_dim(basepoint.n());
  double worst = 0.0;
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nb; ++k) {
      const CMat expected = -comm(d.frame.theta[j], d.frame.adjoint(d.frame.theta[k]));
      worst = std::max(worst, max_abs(curvature_operator(d, j, k) - expected));
    }
  return worst;
}

double FlatnessReport::max() const { return std::max({plaquette, antiholomorphic, holomorphic, theta_closed}); }

namespace {

// Connection matrix of D + theta + conj(theta) along the real direction
// (coord, dir) with dir = 1 (real part) or i (imaginary part).
CMat reconstructed_connection(const ConnectionData& d, int coord, cd dir) {
  const CMat hol = d.a[coord] + d.frame.theta[coord];
  const CMat anti = d.abar[coord] + d.frame.theta[coord].conjugate();
  return dir * hol + std::conj(dir) * anti;
}

}  // namespace

FlatnessReport flatness_check(const HiggsBundle& b, const BsdPoint& basepoint, const FdOptions& fd) {
  FlatnessReport rep;
  const ConnectionData d = connection_data(b, basepoint, fd);
  const int nb = domain_dim(basepoint.n());
  for (int j = 0; j < nb; ++j) {
    for (int k = 0; k < nb; ++k) {
      CMat hh = comm(d.a[j], d.a[k]), aa = comm(d.abar[j], d.abar[k]);
      for (std::size_t p = 0; p < d.dproj[j].size(); ++p) {
        hh += comm(d.dproj[j][p], d.dproj[k][p]);
        aa += comm(d.dbarproj[j][p], d.dbarproj[k][p]);
      }
      rep.holomorphic = std::max(rep.holomorphic, max_abs(hh));
      rep.antiholomorphic = std::max(rep.antiholomorphic, max_abs(aa));
    }
  }
  std::vector<CMat> dtheta;  // dtheta[c * nb + j] = d theta_j / dt^c
  for (int c = 0; c < nb; ++c)
    for (int j = 0; j < nb; ++j)
      dtheta.push_back(
          wirtinger_fd([&](const BsdPoint& p) { return higgs_frame(b, p).theta[j]; }, basepoint, c, fd).first);
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nb; ++k) {
      const CMat closed = dtheta[j * nb + k] - dtheta[k * nb + j] + comm(d.a[j], d.frame.theta[k]) -
                          comm(d.a[k], d.frame.theta[j]);
      rep.theta_closed = std::max(rep.theta_closed, max_abs(closed));
    }

  // Parallel transport around small coordinate squares in every pair of real directions.
  const double h = fd.step;
  const int r = d.frame.rank();
  std::vector<std::pair<int, cd>> dirs;
  for (int c = 0; c < nb; ++c) {
    dirs.emplace_back(c, 1.0);
    dirs.emplace_back(c, kI);
  }
  auto at = [&](const std::pair<int, cd>& u, double su, const std::pair<int, cd>& v, double sv) {
    BsdPoint p = displaced(basepoint, u.first, u.second, su);
    return displaced(p, v.first, v.second, sv);
  };
  for (std::size_t iu = 0; iu < dirs.size(); ++iu) {
    for (std::size_t iv = iu + 1; iv < dirs.size(); ++iv) {
      const auto& u = dirs[iu];
      const auto& v = dirs[iv];
      auto step = [&](const BsdPoint& mid, const std::pair<int, cd>& dir, double sign) {
        const CMat g = reconstructed_connection(connection_data(b, mid, fd), dir.first, dir.second);
        return CMat((-sign * h * g).exp());
      };
      CMat hol = step(at(u, 0.0, v, -0.5 * h), u, 1.0);
      hol = step(at(u, 0.5 * h, v, 0.0), v, 1.0) * hol;
      hol = step(at(u, 0.0, v, 0.5 * h), u, -1.0) * hol;
      hol = step(at(u, -0.5 * h, v, 0.0), v, -1.0) * hol;
      rep.plaquette = std::max(rep.plaquette, max_abs(hol - CMat::Identity(r, r)) / (h * h));
    }
  }
  return rep;
}

}  // namespace pklab
