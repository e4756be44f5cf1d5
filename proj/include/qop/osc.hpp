#pragma once

#include "qop/graded.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qop {

enum class Stat : std::uint8_t { boson = 0, fermion = 1 };

// One superoscillator pair (xi^dagger, xi). Labels are 0-based: row in I, col outside I.
struct OscFamily {
  int row = 0;
  int col = 0;
  Stat stat = Stat::boson;
  int copy = 0;  // distinguishes independent copies (e.g. the two factors of a fused product)
  bool module = false;  // realizes a gl(I) module chain instead of a Fock oscillator
};

class FamilySet {
 public:
  FamilySet() = default;
  explicit FamilySet(std::vector<OscFamily> fams) : fams_(std::move(fams)) {}

  int size() const { return static_cast<int>(fams_.size()); }
  const OscFamily &operator[](int f) const { return fams_[f]; }
  bool fermionic(int f) const { return fams_[f].stat == Stat::fermion; }
  // Index of the family with the given labels, or -1.
  int find(int row, int col, int copy = 0) const;
  int add(const OscFamily &f);

 private:
  std::vector<OscFamily> fams_;
};

// Exponents (r_0, s_0, r_1, s_1, ...): prod_f (xi_f^dagger)^r_f xi_f^s_f in family order.
using Monomial = std::vector<std::uint8_t>;

constexpr int kMaxBosonExponent = 64;

// Finite sum of canonical monomials; zero coefficients are never stored.
struct OscElement {
  std::map<Monomial, cplx> terms;

  bool empty() const { return terms.empty(); }
  bool operator==(const OscElement &o) const { return terms == o.terms; }
};

OscElement osc_scalar(const FamilySet &fs, cplx c);
OscElement osc_create(const FamilySet &fs, int f);
OscElement osc_annihilate(const FamilySet &fs, int f);
OscElement osc_monomial(const FamilySet &fs, const Monomial &mono, cplx c = 1.0);

OscElement osc_add(const OscElement &a, const OscElement &b, cplx cb = 1.0);
OscElement osc_scale(const OscElement &a, cplx c);
OscElement osc_mul(const FamilySet &fs, const OscElement &a, const OscElement &b);
// Graded commutator a b - (-1)^{|a||b|} b a for homogeneous a, b.
OscElement osc_supercommutator(const FamilySet &fs, const OscElement &a, const OscElement &b);

int monomial_parity(const FamilySet &fs, const Monomial &mono);
// 0 or 1 for homogeneous elements, -1 for mixed parity, 0 for zero.
int osc_parity(const FamilySet &fs, const OscElement &a);
// Grading automorphism: odd monomials negated.
OscElement osc_grade(const FamilySet &fs, const OscElement &a);
double osc_max_abs(const OscElement &a);
int osc_degree(const OscElement &a);
// Drop terms with |c| <= tol.
OscElement osc_prune(const OscElement &a, double tol);

// Normalized supertrace Str(prod q_f^{N_f} x) / Str(prod q_f^{N_f}), family by family.
// Module families (OscFamily::module) are skipped here; see module_trace.
// Throws singular_twist if some oscillator weight equals 1.
cplx family_trace(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q);

enum class ModuleChain { gl2_verma, gl11 };

// sum_k sign^k q^k poly(k) over the module chain; poly given by power-basis coefficients.
// gl2_verma: k = 0, 1, 2, ... (needs q != 1); gl11: k = 0, 1 with the odd state negated.
cplx verma_chain_trace(ModuleChain kind, cplx q, const std::vector<cplx> &poly);

// Full trace of x over normal families (normalized) and at most one module family
// (unnormalized chain trace with weight qmod).
cplx module_trace(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q);

std::string to_string(const FamilySet &fs, const OscElement &a);

}  // namespace qop
