#pragma once

// Flat Higgs bundles of exterior powers over the domain of compatible
// structures.  Everything lives in the fixed real basis e^I of the degree-k
// exterior power of the complexified dual, so the trivial flat connection is
// plain coordinate differentiation and conjugation is entrywise.

#include <vector>

#include "pklab/exterior.hpp"
#include "pklab/kns.hpp"

namespace pklab {

// The data fixing a chart and a degree.
struct HiggsBundle {
  SymplecticSpace space;
  ComplexStructure j;
  UnitaryFrame frame;
  int k = 1;
};

struct HiggsFrame {
  int k = 0;
  BsdPoint basepoint;
  // proj[p] projects onto the (p, k - p) part; zero when that part is empty.
  std::vector<CMat> proj;
  // One matrix per domain coordinate, of type (-1, 1).
  std::vector<CMat> theta;
  // Real symmetric Gram matrix of the induced metric; <u, v> = u^H gram v.
  CMat gram;

  // Metric adjoint gram^{-1} a^H gram.
  CMat adjoint(const CMat& a) const;
  int rank() const { return static_cast<int>(gram.rows()); }
};

HiggsFrame higgs_frame(const HiggsBundle& bundle, const BsdPoint& basepoint);
HiggsFrame higgs_frame(const SymplecticSpace& space, const ComplexStructure& j, const UnitaryFrame& frame,
                       const BsdPoint& basepoint, int k);

// Exact identities at one point.
struct AlgebraicReport {
  double partition = 0.0;     // |sum proj - I| and |proj_p proj_q| for p != q
  double theta_type = 0.0;    // |theta pi^{p,q} - pi^{p-1,q+1} theta pi^{p,q}|
  double theta_square = 0.0;  // |[theta_j, theta_l]|
  double adjoint = 0.0;       // |theta_j^* - conj(theta_j)|
};
AlgebraicReport algebraic_check(const HiggsFrame& frame);
double adjoint_check(const HiggsFrame& frame);

// First derivatives of the projectors and the connection matrix of D = d + A,
// A = sum_p pi_p d pi_p, along d/dt^j and d/dconj(t^j).
struct ConnectionData {
  HiggsFrame frame;
  std::vector<std::vector<CMat>> dproj;     // [j][p]
  std::vector<std::vector<CMat>> dbarproj;  // [j][p]
  std::vector<CMat> a;                      // A_j
  std::vector<CMat> abar;                   // A_{conj j}
};
ConnectionData connection_data(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

// Max over the frame sections wedge(z_t, conj z_t) and all directions of
// |nabla s - D s - theta s| (holomorphic directions) and its conjugate counterpart.
double connection_split_check(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

// |d<u, v> - <D u, v> - <u, D v>| over pairs of frame sections.
double metric_compatibility_check(const HiggsBundle& bundle, const BsdPoint& basepoint,
                                  const FdOptions& fd = {});

// |d/dconj(t^k) theta_j + [A_{conj k}, theta_j]| over all j, k.
double theta_holomorphicity_check(const HiggsBundle& bundle, const BsdPoint& basepoint,
                                  const FdOptions& fd = {});

// [D_j, D_{conj k}] from the connection data.
CMat curvature_operator(const ConnectionData& data, int j, int k);
CMat curvature_operator(const HiggsBundle& bundle, const BsdPoint& basepoint, int j, int k,
                        const FdOptions& fd = {});
// max_{j,k} |[D_j, D_{conj k}] + [theta_j, theta_k^*]|.
double curvature_identity_check(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

struct FlatnessReport {
  double plaquette = 0.0;        // |holonomy - I| / h^2 of D + theta + conj(theta)
  double antiholomorphic = 0.0;  // |[D_{conj j}, D_{conj k}]|
  double holomorphic = 0.0;      // |[D_j, D_k]|
  double theta_closed = 0.0;     // |D_j theta_k - D_k theta_j|
  double max() const;
};
FlatnessReport flatness_check(const HiggsBundle& bundle, const BsdPoint& basepoint, const FdOptions& fd = {});

}  // namespace pklab
