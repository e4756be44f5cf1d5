#pragma once

#include "qop/osc.hpp"

#include <vector>

namespace qop {

// Tensor product of graded factors (module and/or chain sites); factor 0 is most significant.
struct FactorLayout {
  std::vector<int> dims;
  std::vector<std::vector<int>> par;

  int dim() const;
  std::vector<int> digits(int index) const;
  int index(const std::vector<int> &digits) const;
  std::vector<int> flat_parities() const;

  static FactorLayout chain(const Grading &g, int L);
};

// Square matrix of OscElements; element (i,j) is x_ij (x) |i><j| with the oscillator part on the left.
struct OscMatrix {
  int dim = 0;
  std::vector<OscElement> e;

  OscMatrix() = default;
  explicit OscMatrix(int d) : dim(d), e(static_cast<std::size_t>(d) * d) {}

  OscElement &operator()(int i, int j) { return e[static_cast<std::size_t>(i) * dim + j]; }
  const OscElement &operator()(int i, int j) const { return e[static_cast<std::size_t>(i) * dim + j]; }
};

OscMatrix osc_identity(const FamilySet &fs, int dim);
OscMatrix osc_sub(const OscMatrix &a, const OscMatrix &b);
double max_abs(const OscMatrix &a);

// Graded product: (MN)_sv = sum_t M_st g^{p(s)+p(t)}(N_tv), g the grading automorphism.
OscMatrix osc_matmul(const FamilySet &fs, const std::vector<int> &par, const OscMatrix &a,
                     const OscMatrix &b);

// Embeds an operator acting on the listed factors (ordinary coefficients of the local graded
// space, flat index over those factors in the given order) into the full layout.
OscMatrix embed_local(const OscMatrix &local, const std::vector<int> &positions,
                      const FactorLayout &layout);

}  // namespace qop
