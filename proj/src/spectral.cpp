#include "pklab/spectral.hpp"

#include <algorithm>
#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace pklab {

namespace {

// FFTW's planner is not thread safe; plan creation and destruction are serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  FftPlan(const std::vector<int>& shape, int sign) {
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!buffer_) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buffer_, buffer_, sign, FFTW_ESTIMATE);
    size_ = total;
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buffer_);
  }

  CVec run(const CVec& in) {
    for (std::size_t i = 0; i < size_; ++i) {
      buffer_[i][0] = in(i).real();
      buffer_[i][1] = in(i).imag();
    }
    fftw_execute(plan_);
    CVec out(static_cast<Eigen::Index>(size_));
    for (std::size_t i = 0; i < size_; ++i) out(i) = cd(buffer_[i][0], buffer_[i][1]);
    return out;
  }

 private:
  fftw_complex* buffer_ = nullptr;
  fftw_plan plan_ = nullptr;
  std::size_t size_ = 0;
};

// Signed frequency of index i on an axis of length n.
int frequency(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

TorusGrid::TorusGrid(Mat periods, int points_per_axis) : periods_(std::move(periods)), n_(points_per_axis) {
  require_dims(periods_.rows() == periods_.cols() && periods_.rows() % 2 == 0 && periods_.rows() > 0,
               "TorusGrid: periods must be a square even-dimensional matrix");
  require_dims(n_ >= 4 && n_ % 2 == 0, "TorusGrid: points per axis must be even and at least 4");
  const double det = periods_.determinant();
  if (std::abs(det) < 1e-14) throw DomainError("TorusGrid: degenerate lattice");
  volume_ = std::abs(det);
  inverse_ = periods_.inverse();
  shape_.assign(periods_.rows(), n_);
  size_ = 1;
  for (int s : shape_) size_ *= s;
}

Vec TorusGrid::point(int idx) const {
  const int d = real_dim();
  Vec u(d);
  for (int r = d - 1; r >= 0; --r) {
    u(r) = double(idx % n_) / n_;
    idx /= n_;
  }
  return periods_ * u;
}

CVec TorusGrid::forward(const CVec& f) const {
  require_dims(f.size() == size_, "TorusGrid: data size mismatch");
  FftPlan plan(shape_, FFTW_FORWARD);
  return plan.run(f) / double(size_);
}

CVec TorusGrid::backward(const CVec& fhat) const {
  FftPlan plan(shape_, FFTW_BACKWARD);
  return plan.run(fhat);
}

CVec TorusGrid::real_derivative(const CVec& f, int r) const {
  // u = P^{-1} x, so d/dx_r = sum_i inverse(i, r) d/du_i, and d/du_i -> 2 pi i k_i.
  CVec fhat = forward(f);
  const int d = real_dim();
  std::vector<int> k(d);
  for (int idx = 0; idx < size_; ++idx) {
    int rest = idx;
    bool nyquist = false;
    double w = 0.0;
    for (int i = d - 1; i >= 0; --i) {
      const int ki = rest % n_;
      rest /= n_;
      nyquist = nyquist || (ki == n_ / 2 && inverse_(i, r) != 0.0);
      w += inverse_(i, r) * frequency(ki, n_);
    }
    fhat(idx) = nyquist ? cd(0.0) : fhat(idx) * cd(0.0, 2.0 * std::numbers::pi * w);
  }
  return backward(fhat);
}

CVec TorusGrid::wirtinger(const CVec& f, int alpha, bool bar) const {
  require_dims(alpha >= 0 && alpha < complex_dim(), "TorusGrid: coordinate out of range");
  const CVec dx = real_derivative(f, 2 * alpha);
  const CVec dy = real_derivative(f, 2 * alpha + 1);
  return 0.5 * (bar ? CVec(dx + kI * dy) : CVec(dx - kI * dy));
}

CVec TorusGrid::mixed(const CVec& f, int alpha, int beta) const { return wirtinger(wirtinger(f, beta, true), alpha, false); }

cd TorusGrid::integrate(const CVec& f) const {
  require_dims(f.size() == size_, "TorusGrid: data size mismatch");
  return f.mean() * volume_;
}

double TorusGrid::high_mode_fraction(const CVec& f, double reference) const {
  const CVec fhat = forward(f);
  const int d = real_dim();
  double total = 0.0, high = 0.0;
  for (int idx = 0; idx < size_; ++idx) {
    int rest = idx;
    bool is_high = false;
    for (int i = 0; i < d; ++i) {
      is_high = is_high || 3 * std::abs(frequency(rest % n_, n_)) > n_;
      rest /= n_;
    }
    const double e = std::norm(fhat(idx));
    total += e;
    if (is_high) high += e;
  }
  const double denom = std::max(total, reference);
  return denom == 0.0 ? 0.0 : high / denom;
}

}  // namespace pklab
