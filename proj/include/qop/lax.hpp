#pragma once

#include "qop/osc_matrix.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace qop {

// Sorted subset of 0-based labels.
struct Subset {
  std::vector<int> members;

  Subset() = default;
  explicit Subset(std::vector<int> m);
  static Subset from_mask(unsigned mask, int N);
  static Subset full(int N);

  unsigned mask() const;
  bool contains(int a) const;
  int size() const { return static_cast<int>(members.size()); }
  Subset complement(int N) const;
  Subset with(int a) const;
  bool operator==(const Subset &o) const { return members == o.members; }
  bool operator<(const Subset &o) const { return members < o.members; }
};

std::string to_string(const Subset &I);  // 1-based, e.g. "{1,3}"

enum class ModuleKind { singlet, fundamental, verma, explicit_table };

using GeneratorTable = std::map<std::pair<int, int>, MatrixXc>;

struct ModuleSpec {
  ModuleKind kind = ModuleKind::singlet;
  std::vector<cplx> lambda;  // verma weights, one per member of I
  GeneratorTable E;          // explicit: E_ab for a, b in I
  std::vector<int> parity;   // explicit: module basis parities

  static ModuleSpec singlet() { return {}; }
  static ModuleSpec fundamental() { return {ModuleKind::fundamental, {}, {}, {}}; }
  static ModuleSpec verma(std::vector<cplx> lambda) { return {ModuleKind::verma, std::move(lambda), {}, {}}; }
  static ModuleSpec explicit_table(GeneratorTable E, std::vector<int> parity) {
    return {ModuleKind::explicit_table, {}, std::move(E), std::move(parity)};
  }
  bool finite() const { return kind == ModuleKind::fundamental || kind == ModuleKind::explicit_table; }
};

// Max residual of [E_ab, E_cd} = d_cb E_ad - (-1)^{(a+b)(c+d)} d_ad E_cb over the table.
double generator_relation_residual(const Grading &g, const Subset &I, const GeneratorTable &E,
                                   const std::vector<int> &parity);
// Graded matrix units of gl(n|m) acting on C^(n|m).
GeneratorTable fundamental_generators(const Grading &g);

struct LaxOperator {
  Grading g;
  Subset I;
  cplx z;
  ModuleSpec mod;
  FamilySet fams;
  // Matrix entries L_AB, without the convention sign; oscillator/module-family valued.
  std::vector<OscElement> entries;
  // Finite modules: L_AB as module matrices.
  std::vector<MatrixXc> module_entries;
  int module_dim = 1;
  std::vector<int> module_parity{0};
  // Ordinary coefficients on [site] or [module, site].
  FactorLayout layout;
  OscMatrix local;

  bool has_module_factor() const { return mod.finite(); }
  const OscElement &entry(int a, int b) const { return entries[a * g.size() + b]; }
};

// (-1)^{p(A)p(B)+p(B)}
int lax_sign(const Grading &g, int a, int b);

// Family set of L_I: (A, D) for A in I, D outside I, lexicographic.
FamilySet lax_families(const Grading &g, const Subset &I);

// Entries L_AB(z) from a family lookup (row A in I, col D outside I -> family index) and
// optional gl(I) generators E_AB (A, B in I).
std::vector<OscElement> lax_entries(const Grading &g, const Subset &I, const FamilySet &fs,
                                    const std::function<int(int, int)> &family_of,
                                    const std::map<std::pair<int, int>, OscElement> *E, cplx z);

LaxOperator lax_canonical(const Grading &g, const Subset &I, const ModuleSpec &mod, cplx z);
// Full-set Lax with a finite-dimensional gl(n|m) module.
LaxOperator lax_full(const Grading &g, const ModuleSpec &rep, cplx z);

// Rebuilds the local coefficient matrix from entries / module_entries.
void rebuild_local(LaxOperator &L);

double ybe_residual(const LaxOperator &L1, const LaxOperator &L2);
double check_ybe(const Grading &g, const Subset &I, const ModuleSpec &mod, cplx z1, cplx z2);

// Fused product data for disjoint I, J: families of copies [1] (for I) and [2] (for J),
// both sides' entries and the induced gl(I u J) generators.
struct FusionData {
  FamilySet fams;
  std::vector<OscElement> lhs;       // (L_I^[1] L_J^[2])_AB
  std::vector<OscElement> core;      // (L_{I u J} G)_AB before similarity
  std::map<std::pair<int, int>, OscElement> induced;  // E~_AB, A, B in I u J
  OscElement s_exponent;             // S = exp(s_exponent)
};

FusionData fusion_data(const Grading &g, const Subset &I, const Subset &J, cplx z, cplx lambda);

struct FactorizationResult {
  double residual = 0.0;
  int window_states = 0;
  int total_states = 0;
  bool exact = false;  // no bosonic truncation involved
};

// LHS vs S (L_{I u J} G) S^{-1} on truncated Fock spaces, compared on the guarded window.
FactorizationResult verify_factorization(const Grading &g, const Subset &I, const Subset &J, cplx z,
                                         cplx lambda, int cutoff);

}  // namespace qop
