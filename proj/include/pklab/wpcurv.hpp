#pragma once

// The Hilbert-Schmidt (non-harmonic Weil-Petersson) metric pulled back by the
// Higgs field, its curvature by finite differences and by the algebraic
// three-term formula, and curvature bound sweeps.

#include <cstdint>
#include <vector>

#include "pklab/higgs.hpp"

namespace pklab {

struct MetricSample {
  BsdPoint basepoint;
  CMat gram;  // gram(j, k) = <theta_j, theta_k> = tr(theta_k^* theta_j)
};

// Uses bundle.k as the degree of the exterior power carrying theta.
MetricSample df_metric(const HiggsBundle& bundle, const BsdPoint& basepoint);

// Entrywise ratio of the degree-k metric to the degree-1 metric.
struct DegreeRatio {
  double mean = 0.0;
  double spread = 0.0;  // max |ratio - mean| over entries with |G1| > 1e-8
};
DegreeRatio degree_ratio(const HiggsBundle& bundle, const BsdPoint& basepoint);

// R(j, k, l, m) = R_{j kbar l mbar}.
class CurvatureTensor {
 public:
  CurvatureTensor(int dim, BsdPoint basepoint);
  int dim() const { return dim_; }
  const BsdPoint& basepoint() const { return basepoint_; }
  cd& operator()(int j, int k, int l, int m) { return data_[index(j, k, l, m)]; }
  cd operator()(int j, int k, int l, int m) const { return data_[index(j, k, l, m)]; }
  // R(xi, conj xi', eta, conj eta') = sum R_{jkbar lmbar} xi^j conj(xi'^k) eta^l conj(eta'^m).
  cd contract(const CVec& xi, const CVec& xi2, const CVec& eta, const CVec& eta2) const;
  // Ric_{j kbar} = sum G^{mbar l} R_{j kbar l mbar}.
  CMat ricci(const CMat& gram) const;
  // max |R_{jkbar lmbar} - R_{lkbar jmbar}| and |R_{jkbar lmbar} - conj R_{kjbar mlbar}|.
  double symmetry_residual() const;
  double max_abs_entry() const;

 private:
  std::size_t index(int j, int k, int l, int m) const {
    return ((static_cast<std::size_t>(j) * dim_ + k) * dim_ + l) * dim_ + m;
  }
  int dim_;
  BsdPoint basepoint_;
  std::vector<cd> data_;
};

// -d_l dbar_m G + (d_l G) G^{-1} (dbar_m G), with second differences of G.
CurvatureTensor curvature_fd(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

// The three-term expression in theta, theta^* and the projection of the
// covariant derivative of theta off span{theta_j}.  Degree 1 only.
struct CurvatureTerms {
  CurvatureTensor quartic;     // first two terms
  CurvatureTensor projection;  // third term
  CurvatureTensor total() const;
};
CurvatureTerms curvature_formula(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

// Max entrywise deviation between curvature_fd and curvature_formula.
double curvature_formula_check(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

// max |d_l G_{jkbar} - d_j G_{lkbar}|.
double kahler_closedness(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

struct BurnsSample {
  CMat phi;           // basepoint
  double radius = 0.0;  // spectral norm of phi
  double holomorphic = 0.0;
  double bisectional = 0.0;
  double ricci = 0.0;
};

struct BurnsReport {
  int n = 0;
  int samples = 0;
  double bound = 0.0;           // -2/n
  double max_holomorphic = 0.0;  // max R(xi,xi,xi,xi) / |xi|^4
  double max_bisectional = 0.0;  // max R(xi,xi,eta,eta) over unit xi, eta
  double max_bisectional_gap = 0.0;  // max R(xi,xi,eta,eta) + (2/n)|<eta,xi>|^2
  double max_ricci = 0.0;       // max Ric(xi,xi) / |xi|^2
  double max_symmetry = 0.0;
  std::vector<BurnsSample> trace;  // one entry per sample, in draw order
};
// Seeded basepoints with spectral norm at most `radius` and directions that are unit under G.
BurnsReport burns_bounds(const HiggsBundle& bundle, int samples, std::uint64_t seed, double radius = 0.8,
                         const FdOptions& fd = {});

struct TracePair {
  double lhs = 0.0;  // tr((k^* k)^2)
  double rhs = 0.0;  // (tr k^* k)^2 / n
};
TracePair trace_inequality(const CMat& kappa);

}  // namespace pklab
