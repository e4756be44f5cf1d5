#pragma once

#include "qop/transfer.hpp"

#include <map>
#include <string>
#include <vector>

namespace qop {

struct HasseEdge {
  Subset from, to;
  int label = 0;   // added label
  int parity = 0;  // 0 bosonic (solid), 1 fermionic (dashed)
};

// Face (I, I+a, I+b, I+a+b) of the hypercube, a < b.
struct Plaquette {
  Subset I;
  int a = 0, b = 0;
};

struct HasseDiagram {
  Grading g;
  std::vector<Subset> nodes;  // ordered by size, then lexicographically
  std::vector<HasseEdge> edges;
  std::vector<Plaquette> plaquettes;
};

HasseDiagram build_hasse(const Grading &g);

struct NestingPath {
  std::vector<int> order;      // labels in the order they are added
  std::vector<Subset> chain;   // I_0 = {} ... I_N = full
  std::string grading;         // "B"/"F" per added label, e.g. "BFB"
};

std::vector<NestingPath> enumerate_paths(const HasseDiagram &d);
// Paths grouped by grading string.
std::map<std::string, std::vector<NestingPath>> grading_classes(const std::vector<NestingPath> &paths);

std::string to_string(const NestingPath &p);  // e.g. "{} -> {3} -> {1,3} -> {1,2,3}"
// Graphviz description: solid edges bosonic, dashed fermionic.
std::string hasse_dot(const HasseDiagram &d);

enum class PlaquetteKind { same_parity, mixed_parity };
PlaquetteKind plaquette_kind(const Grading &g, const Plaquette &pl);

// Q-Q relation on one face with A = first, B = second added label. Same parity:
//   (-1)^A 2i sin((Phi_A-Phi_B)/2) Q_{IAB}(z) Q_I(z) = Q_{IA}(z+s) Q_{IB}(z-s) - Q_{IA}(z-s) Q_{IB}(z+s)
// mixed parity:
//   (-1)^A 2i sin((Phi_A-Phi_B)/2) Q_{IA}(z) Q_{IB}(z) = Q_{IAB}(z+s) Q_I(z-s) - Q_{IAB}(z-s) Q_I(z+s)
// with s = shift (1/2). Returns the max entry residual over zs.
double verify_qq(const Grading &g, int L, const Twists &tw, const Subset &I, int A, int B,
                 const std::vector<cplx> &zs, double shift = 0.5);

struct TqqResult {
  double tqq = 0.0;    // T+_eps(z) vs 2i sin((Phi1-Phi2)/2) Q1(z1) Q2(z2)
  double split = 0.0;  // T+_0(z) vs T_singlet(z+1/2) - T_singlet(z-1/2)
};

// gl(1|1) only; zs are (z1, z2) pairs.
TqqResult verify_tqq_gl11(int L, const Twists &tw, const std::vector<std::pair<cplx, cplx>> &zs);

// Delta_I X+(z, Lambda) vs prod_k Q_{A_k}(z + lambda_k + rho_k), |I| <= 2.
double verify_xqqq(const Grading &g, const Subset &I, const std::vector<cplx> &Lambda, int L,
                   const Twists &tw, cplx z);

// gl(2): generators of the (2j+1)-dimensional quotient of the Verma realization with Lambda = (j,-j).
GeneratorTable gl2_finite_table(int two_j);
// gl(2): T+_j(z) - T_j(z) - T+_{-j-1}(z) on the full set.
double verify_split_gl2(int two_j, int L, const Twists &tw, cplx z);

}  // namespace qop
