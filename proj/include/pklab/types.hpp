#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace pklab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr cd kI{0.0, 1.0};

// Error taxonomy shared by all modules.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
// A point lies outside (or too close to the boundary of) a domain.
struct DomainError : Error {
  using Error::Error;
};
struct PositivityError : Error {
  using Error::Error;
};
struct AdmissibilityError : Error {
  using Error::Error;
};
struct ConvexityError : Error {
  using Error::Error;
};
// Fiber integration requested on a model without compact torus fibers.
struct PropernessError : Error {
  using Error::Error;
};
// A spectral grid does not resolve the data (Nyquist guard).
struct ResolutionError : Error {
  using Error::Error;
};
struct CaseNotCoveredError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

// Max-abs entry, the norm used by most residuals.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace pklab
