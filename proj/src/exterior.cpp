#include "pklab/exterior.hpp"

#include <bit>

namespace pklab {

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

ExteriorBasis::ExteriorBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  require_dims(dim >= 0 && dim <= 20, "ExteriorBasis: dimension out of range");
  require_dims(degree >= 0 && degree <= dim, "ExteriorBasis: degree out of range");
  lookup_.assign(std::size_t{1} << dim, -1);
  // Lexicographic order of sorted index tuples.
  std::vector<int> idx(degree);
  for (int i = 0; i < degree; ++i) idx[i] = i;
  while (true) {
    std::uint32_t m = 0;
    for (int i : idx) m |= (1u << i);
    lookup_[m] = static_cast<int>(masks_.size());
    masks_.push_back(m);
    int p = degree - 1;
    while (p >= 0 && idx[p] == dim - degree + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < degree; ++q) idx[q] = idx[q - 1] + 1;
  }
}

std::vector<int> ExteriorBasis::indices(int i) const {
  std::vector<int> out;
  for (int b = 0; b < dim_; ++b)
    if (masks_[i] & (1u << b)) out.push_back(b);
  return out;
}

int ExteriorBasis::position(std::uint32_t mask) const {
  return mask < lookup_.size() ? lookup_[mask] : -1;
}

namespace {

// Number of set bits strictly between positions lo and hi.
int bits_between(std::uint32_t m, int a, int b) {
  int lo = std::min(a, b), hi = std::max(a, b);
  if (hi - lo <= 1) return 0;
  std::uint32_t window = ((1u << hi) - 1u) & ~((1u << (lo + 1)) - 1u);
  return std::popcount(m & window);
}

}  // namespace

CMat derivation_extension(const CMat& a, int degree) {
  require_dims(a.rows() == a.cols(), "derivation_extension: square matrix required");
  const int d = static_cast<int>(a.rows());
  ExteriorBasis basis(d, degree);
  CMat out = CMat::Zero(basis.size(), basis.size());
  for (int col = 0; col < basis.size(); ++col) {
    const std::uint32_t m = basis.mask(col);
    for (int src = 0; src < d; ++src) {
      if (!(m & (1u << src))) continue;
      const std::uint32_t rest = m & ~(1u << src);
      for (int dst = 0; dst < d; ++dst) {
        if (a(dst, src) == cd(0.0)) continue;
        if (dst != src && (rest & (1u << dst))) continue;
        const int row = basis.position(rest | (1u << dst));
        const double sign = (bits_between(rest, src, dst) % 2 == 0) ? 1.0 : -1.0;
        out(row, col) += sign * a(dst, src);
      }
    }
  }
  return out;
}

CMat compound(const CMat& m, int degree) {
  require_dims(m.rows() == m.cols(), "compound: square matrix required");
  const int d = static_cast<int>(m.rows());
  ExteriorBasis basis(d, degree);
  CMat out(basis.size(), basis.size());
  if (degree == 0) {
    out(0, 0) = 1.0;
    return out;
  }
  for (int i = 0; i < basis.size(); ++i) {
    auto ri = basis.indices(i);
    for (int j = 0; j < basis.size(); ++j) {
      auto cj = basis.indices(j);
      CMat sub(degree, degree);
      for (int p = 0; p < degree; ++p)
        for (int q = 0; q < degree; ++q) sub(p, q) = m(ri[p], cj[q]);
      out(i, j) = sub.determinant();
    }
  }
  return out;
}

CVec wedge(const CMat& vs) {
  const int d = static_cast<int>(vs.rows());
  const int k = static_cast<int>(vs.cols());
  ExteriorBasis basis(d, k);
  CVec out(basis.size());
  if (k == 0) {
    out(0) = 1.0;
    return out;
  }
  for (int i = 0; i < basis.size(); ++i) {
    auto ri = basis.indices(i);
    CMat sub(k, k);
    for (int p = 0; p < k; ++p) sub.row(p) = vs.row(ri[p]);
    out(i) = sub.determinant();
  }
  return out;
}

}  // namespace pklab
