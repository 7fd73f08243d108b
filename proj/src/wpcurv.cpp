#include "pklab/wpcurv.hpp"

#include <algorithm>
#include <random>

namespace pklab {

namespace {

cd hs(const HiggsFrame& f, const CMat& x, const CMat& y) { return (f.adjoint(y) * x).trace(); }

HiggsBundle with_degree(const HiggsBundle& b, int k) {
  HiggsBundle out = b;
  out.k = k;
  return out;
}

// Real direction r: coordinate r / 2, real part for even r and imaginary part for odd r.
BsdPoint along(const BsdPoint& p, int r, double s) { return displaced(p, r / 2, r % 2 ? kI : cd(1.0), s); }

CMat comm(const CMat& a, const CMat& b) { return a * b - b * a; }

}  // namespace

MetricSample df_metric(const HiggsBundle& bundle, const BsdPoint& basepoint) {
  const HiggsFrame f = higgs_frame(bundle, basepoint);
  const int nb = static_cast<int>(f.theta.size());
  CMat g(nb, nb);
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nb; ++k) g(j, k) = hs(f, f.theta[j], f.theta[k]);
  return MetricSample{basepoint, 0.5 * (g + g.adjoint())};
}

DegreeRatio degree_ratio(const HiggsBundle& bundle, const BsdPoint& basepoint) {
  const CMat gk = df_metric(bundle, basepoint).gram;
  const CMat g1 = df_metric(with_degree(bundle, 1), basepoint).gram;
  std::vector<double> ratios;
  for (Eigen::Index i = 0; i < g1.size(); ++i)
    if (std::abs(g1(i)) > 1e-8) ratios.push_back((gk(i) / g1(i)).real());
  DegreeRatio r;
  if (ratios.empty()) return r;
  for (double x : ratios) r.mean += x;
  r.mean /= double(ratios.size());
  for (Eigen::Index i = 0; i < g1.size(); ++i)
    if (std::abs(g1(i)) > 1e-8) r.spread = std::max(r.spread, std::abs(gk(i) / g1(i) - r.mean));
  return r;
}

CurvatureTensor::CurvatureTensor(int dim, BsdPoint basepoint)
    : dim_(dim), basepoint_(std::move(basepoint)), data_(std::size_t(dim) * dim * dim * dim, cd(0.0)) {}

cd CurvatureTensor::contract(const CVec& xi, const CVec& xi2, const CVec& eta, const CVec& eta2) const {
  cd sum = 0.0;
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k)
      for (int l = 0; l < dim_; ++l)
        for (int m = 0; m < dim_; ++m)
          sum += (*this)(j, k, l, m) * xi(j) * std::conj(xi2(k)) * eta(l) * std::conj(eta2(m));
  return sum;
}

CMat CurvatureTensor::ricci(const CMat& gram) const {
  const CMat ginv = gram.inverse();
  CMat ric = CMat::Zero(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k)
      for (int l = 0; l < dim_; ++l)
        for (int m = 0; m < dim_; ++m) ric(j, k) += ginv(m, l) * (*this)(j, k, l, m);
  return ric;
}

double CurvatureTensor::symmetry_residual() const {
  double worst = 0.0;
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k)
      for (int l = 0; l < dim_; ++l)
        for (int m = 0; m < dim_; ++m) {
          const cd r = (*this)(j, k, l, m);
          worst = std::max({worst, std::abs(r - (*this)(l, k, j, m)), std::abs(r - std::conj((*this)(k, j, m, l)))});
        }
  return worst;
}

double CurvatureTensor::max_abs_entry() const {
  double worst = 0.0;
  for (const cd& v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

CurvatureTensor curvature_fd(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd) {
  auto gram = [&](const BsdPoint& p) { return df_metric(bundle, p).gram; };
  const CMat g0 = gram(basepoint);
  const int nb = static_cast<int>(g0.rows());
  const int nr = 2 * nb;
  std::vector<CMat> first(nr);
  for (int r = 0; r < nr; ++r) first[r] = central_derivative([&](double s) { return gram(along(basepoint, r, s)); }, fd);
  std::vector<CMat> second(nr * nr);
  for (int r1 = 0; r1 < nr; ++r1)
    for (int r2 = r1; r2 < nr; ++r2) {
      CMat h = r1 == r2 ? central_second([&](double s) { return gram(along(basepoint, r1, s)); }, fd)
                        : central_mixed([&](double s, double u) { return gram(along(along(basepoint, r1, s), r2, u)); },
                                        fd);
      second[r1 * nr + r2] = h;
      second[r2 * nr + r1] = h;
    }
  auto hess = [&](int r1, int r2) -> const CMat& { return second[r1 * nr + r2]; };
  const CMat ginv = g0.inverse();
  CurvatureTensor out(nb, basepoint);
  for (int l = 0; l < nb; ++l) {
    const CMat dl = 0.5 * (first[2 * l] - kI * first[2 * l + 1]);
    for (int m = 0; m < nb; ++m) {
      const CMat dbarm = 0.5 * (first[2 * m] + kI * first[2 * m + 1]);
      const CMat mixed = 0.25 * (hess(2 * l, 2 * m) + hess(2 * l + 1, 2 * m + 1) +
                                 kI * (hess(2 * l, 2 * m + 1) - hess(2 * l + 1, 2 * m)));
      const CMat r = -mixed + dl * ginv * dbarm;
      for (int j = 0; j < nb; ++j)
        for (int k = 0; k < nb; ++k) out(j, k, l, m) = r(j, k);
    }
  }
  return out;
}

CurvatureTensor CurvatureTerms::total() const {
  CurvatureTensor out = quartic;
  const int d = out.dim();
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) out(j, k, l, m) += projection(j, k, l, m);
  return out;
}

CurvatureTerms curvature_formula(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd) {
  if (bundle.k != 1) throw CaseNotCoveredError("curvature_formula: the three-term formula is stated in degree 1");
  const ConnectionData data = connection_data(bundle, basepoint, fd);
  const HiggsFrame& f = data.frame;
  const int nb = static_cast<int>(f.theta.size());
  CMat g(nb, nb);
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nb; ++k) g(j, k) = hs(f, f.theta[j], f.theta[k]);
  const auto glu = g.transpose().partialPivLu();
  // Covariant derivative of theta_j along d/dt^l, with the span{theta} part removed.
  std::vector<CMat> perp(nb * nb);  // perp[l * nb + j]
  for (int j = 0; j < nb; ++j)
    for (int l = 0; l < nb; ++l) {
      const CMat dtheta =
          wirtinger_fd([&](const BsdPoint& p) { return higgs_frame(bundle, p).theta[j]; }, basepoint, l, fd).first;
      const CMat cov = dtheta + comm(data.a[l], f.theta[j]);
      CVec rhs(nb);
      for (int p = 0; p < nb; ++p) rhs(p) = hs(f, cov, f.theta[p]);
      const CVec c = glu.solve(rhs);
      CMat proj = cov;
      for (int q = 0; q < nb; ++q) proj -= c(q) * f.theta[q];
      perp[l * nb + j] = proj;
    }
  std::vector<CMat> star;
  for (const CMat& t : f.theta) star.push_back(f.adjoint(t));
  CurvatureTerms out{CurvatureTensor(nb, basepoint), CurvatureTensor(nb, basepoint)};
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l)
        for (int m = 0; m < nb; ++m) {
          out.quartic(j, k, l, m) = -hs(f, star[m] * f.theta[j], star[l] * f.theta[k]) -
                                    hs(f, f.theta[j] * star[m], f.theta[k] * star[l]);
          out.projection(j, k, l, m) = -hs(f, perp[l * nb + j], perp[m * nb + k]);
        }
  return out;
}

double curvature_formula_check(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd) {
  const CurvatureTensor a = curvature_fd(bundle, basepoint, fd);
  const CurvatureTensor b = curvature_formula(bundle, basepoint, fd).total();
  double worst = 0.0;
  const int d = a.dim();
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) worst = std::max(worst, std::abs(a(j, k, l, m) - b(j, k, l, m)));
  return worst;
}

double kahler_closedness(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd) {
  auto gram = [&](const BsdPoint& p) { return df_metric(bundle, p).gram; };
  const int nb = domain_dim(basepoint.n());
  std::vector<CMat> d;
  for (int l = 0; l < nb; ++l) d.push_back(wirtinger_fd(gram, basepoint, l, fd).first);
  double worst = 0.0;
  for (int l = 0; l < nb; ++l)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k) worst = std::max(worst, std::abs(d[l](j, k) - d[j](l, k)));
  return worst;
}

BurnsReport burns_bounds(const HiggsBundle& bundle, int samples, std::uint64_t seed, double radius,
                         const FdOptions& fd) {
  if (samples < 1) throw ConfigError("burns_bounds: samples must be positive");
  const int n = bundle.j.n();
  const int nb = domain_dim(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  BurnsReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.bound = -2.0 / n;
  rep.max_holomorphic = rep.max_bisectional = rep.max_bisectional_gap = rep.max_ricci = -1e300;
  auto random_vec = [&](int len) {
    CVec v(len);
    for (int i = 0; i < len; ++i) v(i) = cd(nd(rng), nd(rng));
    return v;
  };
  for (int s = 0; s < samples; ++s) {
    CMat m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) m(a, b) = m(b, a) = cd(nd(rng), nd(rng));
    const double norm = Eigen::JacobiSVD<CMat>(m).singularValues()(0);
    const double rho = radius * ud(rng);
    const BsdPoint p = make_bsd_point(m * (rho / norm));
    const CMat g = df_metric(bundle, p).gram;
    const CurvatureTensor r = curvature_fd(bundle, p, fd);
    rep.max_symmetry = std::max(rep.max_symmetry, r.symmetry_residual());
    const CMat ric = r.ricci(g);
    auto unit = [&](CVec v) { return CVec(v / std::sqrt((v.transpose() * g * v.conjugate())(0, 0).real())); };
    const CVec xi = unit(random_vec(nb));
    const CVec eta = unit(random_vec(nb));
    const double pairing = std::abs((eta.transpose() * g * xi.conjugate())(0, 0));
    const BurnsSample sample{p.phi, rho, r.contract(xi, xi, xi, xi).real(), r.contract(xi, xi, eta, eta).real(),
                             (xi.transpose() * ric * xi.conjugate())(0, 0).real()};
    rep.max_holomorphic = std::max(rep.max_holomorphic, sample.holomorphic);
    rep.max_bisectional = std::max(rep.max_bisectional, sample.bisectional);
    rep.max_bisectional_gap = std::max(rep.max_bisectional_gap, sample.bisectional + (2.0 / n) * pairing * pairing);
    rep.max_ricci = std::max(rep.max_ricci, sample.ricci);
    rep.trace.push_back(sample);
  }
  return rep;
}

TracePair trace_inequality(const CMat& kappa) {
  require_dims(kappa.rows() == kappa.cols() && kappa.rows() > 0, "trace_inequality: square matrix required");
  const CMat m = kappa.adjoint() * kappa;
  const double tr = m.trace().real();
  return TracePair{(m * m).trace().real(), tr * tr / double(kappa.rows())};
}

}  // namespace pklab
