#pragma once

// Exterior powers of C^d in the lexicographic basis of index sets.

#include <cstdint>
#include <vector>

#include "pklab/types.hpp"

namespace pklab {

class ExteriorBasis {
 public:
  ExteriorBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(masks_.size()); }
  std::uint32_t mask(int i) const { return masks_[i]; }
  std::vector<int> indices(int i) const;
  // Position of an index-set bitmask in the basis, or -1.
  int position(std::uint32_t mask) const;

 private:
  int dim_;
  int degree_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> lookup_;
};

// Matrix of A extended to the degree-k exterior power as a derivation:
// A(u1 ^ ... ^ uk) = sum_i u1 ^ ... ^ A ui ^ ... ^ uk.
CMat derivation_extension(const CMat& a, int degree);

// k-th compound matrix (the induced map on the exterior power).
CMat compound(const CMat& m, int degree);

// Coefficients of v1 ^ ... ^ vk (columns of vs) in the degree-k basis.
CVec wedge(const CMat& vs);

int binomial(int n, int k);

}  // namespace pklab
