#include "qop/hasse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qop {

HasseDiagram build_hasse(const Grading &g) {
  const int N = g.size();
  HasseDiagram d{g, {}, {}, {}};
  for (unsigned k = 0; k < (1u << N); ++k) d.nodes.push_back(Subset::from_mask(k, N));
  std::stable_sort(d.nodes.begin(), d.nodes.end(), [](const Subset &x, const Subset &y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  for (const Subset &I : d.nodes) {
    const Subset rest = I.complement(N);
    for (int a : rest.members) d.edges.push_back(HasseEdge{I, I.with(a), a, g.parity(a)});
    for (int i = 0; i < rest.size(); ++i)
      for (int j = i + 1; j < rest.size(); ++j) d.plaquettes.push_back(Plaquette{I, rest.members[i], rest.members[j]});
  }
  return d;
}

std::vector<NestingPath> enumerate_paths(const HasseDiagram &d) {
  const Grading &g = d.g;
  std::vector<int> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<NestingPath> out;
  do {
    NestingPath p;
    p.order = order;
    Subset cur;
    p.chain.push_back(cur);
    for (int a : order) {
      cur = cur.with(a);
      p.chain.push_back(cur);
      p.grading += g.parity(a) ? 'F' : 'B';
    }
    out.push_back(std::move(p));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::map<std::string, std::vector<NestingPath>> grading_classes(const std::vector<NestingPath> &paths) {
  std::map<std::string, std::vector<NestingPath>> out;
  for (const NestingPath &p : paths) out[p.grading].push_back(p);
  return out;
}

std::string to_string(const NestingPath &p) {
  std::string s;
  for (std::size_t k = 0; k < p.chain.size(); ++k) s += (k ? " -> " : "") + to_string(p.chain[k]);
  return s;
}

std::string hasse_dot(const HasseDiagram &d) {
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n";
  for (const Subset &I : d.nodes) os << "  \"" << to_string(I) << "\";\n";
  for (const HasseEdge &e : d.edges)
    os << "  \"" << to_string(e.from) << "\" -> \"" << to_string(e.to) << "\" [label=\"" << e.label + 1
       << "\", style=" << (e.parity ? "dashed" : "solid") << "];\n";
  os << "}\n";
  return os.str();
}

PlaquetteKind plaquette_kind(const Grading &g, const Plaquette &pl) {
  return g.parity(pl.a) == g.parity(pl.b) ? PlaquetteKind::same_parity : PlaquetteKind::mixed_parity;
}

double verify_qq(const Grading &g, int L, const Twists &tw, const Subset &I, int A, int B,
                 const std::vector<cplx> &zs, double shift) {
  if (A == B || I.contains(A) || I.contains(B)) throw std::invalid_argument("verify_qq: bad plaquette");
  const cplx s = sine_factor(tw, A, B);
  if (std::abs(s) < 1e-12)
    throw singular_twist(A, B, "singular twist: phi_" + std::to_string(A + 1) + " = phi_" + std::to_string(B + 1));
  const cplx pref = (g.parity(A) ? -1.0 : 1.0) * s;
  const Subset IA = I.with(A), IB = I.with(B), IAB = IA.with(B);
  auto Q = [&](const Subset &S, cplx z) { return q_operator(g, S, L, tw, z).matrix; };
  double worst = 0.0;
  for (cplx z : zs) {
    MatrixXc lhs, rhs;
    if (g.parity(A) == g.parity(B)) {
      lhs = pref * Q(IAB, z) * Q(I, z);
      rhs = Q(IA, z + shift) * Q(IB, z - shift) - Q(IA, z - shift) * Q(IB, z + shift);
    } else {
      lhs = pref * Q(IA, z) * Q(IB, z);
      rhs = Q(IAB, z + shift) * Q(I, z - shift) - Q(IAB, z - shift) * Q(I, z + shift);
    }
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return worst;
}

TqqResult verify_tqq_gl11(int L, const Twists &tw, const std::vector<std::pair<cplx, cplx>> &zs) {
  const Grading g(1, 1);
  const Subset full = Subset::full(2);
  const cplx s = sine_factor(tw, 0, 1);
  TqqResult r;
  for (const auto &[z1, z2] : zs) {
    const cplx eps = 0.5 * (z1 - z2), z = 0.5 * (z1 + z2);
    const MatrixXc Tp = x_plus_operator(g, full, {0.5 + eps, 0.5 - eps}, L, tw, z).matrix;
    const MatrixXc QQ = q_operator(g, Subset({0}), L, tw, z1).matrix * q_operator(g, Subset({1}), L, tw, z2).matrix;
    r.tqq = std::max(r.tqq, max_abs(Tp - s * QQ));
    const MatrixXc T0 = x_plus_operator(g, full, {0.5, 0.5}, L, tw, z).matrix;
    const MatrixXc split = t_operator(g, ModuleSpec::singlet(), L, tw, z + 0.5).matrix -
                           t_operator(g, ModuleSpec::singlet(), L, tw, z - 0.5).matrix;
    r.split = std::max(r.split, max_abs(T0 - split));
  }
  return r;
}

double verify_xqqq(const Grading &g, const Subset &I, const std::vector<cplx> &Lambda, int L,
                   const Twists &tw, cplx z) {
  if (I.size() > 2) throw std::domain_error("verify_xqqq: |I| >= 3 is not supported");
  if (static_cast<int>(Lambda.size()) != I.size()) throw std::invalid_argument("verify_xqqq: one weight per label");
  const cplx delta = super_vandermonde(g, I, tw);
  if (std::abs(delta) < 1e-12) {
    const int a = I.members[0], b = I.members[1];
    throw singular_twist(a, b, "singular twist: super-Vandermonde factor vanishes for (" + std::to_string(a + 1) +
                                   "," + std::to_string(b + 1) + ")");
  }
  std::vector<double> rho(I.size(), 0.0);
  if (I.size() == 2) {
    rho[0] = 0.5 * (g.parity(I.members[1]) ? -1.0 : 1.0);
    rho[1] = -0.5 * (g.parity(I.members[0]) ? -1.0 : 1.0);
  }
  MatrixXc rhs = MatrixXc::Identity(ipow(g.size(), L), ipow(g.size(), L));
  for (int k = 0; k < I.size(); ++k)
    rhs = rhs * q_operator(g, Subset({I.members[k]}), L, tw, z + Lambda[k] + rho[k]).matrix;
  const MatrixXc X = x_plus_operator(g, I, Lambda, L, tw, z).matrix;
  return max_abs(delta * X - rhs);
}

GeneratorTable gl2_finite_table(int two_j) {
  if (two_j < 0) throw std::invalid_argument("gl2_finite_table: 2j must be >= 0");
  const int d = two_j + 1;
  const double j = 0.5 * two_j, c1 = -j, c2 = j;
  GeneratorTable E;
  MatrixXc e11 = MatrixXc::Zero(d, d), e22 = MatrixXc::Zero(d, d), e12 = MatrixXc::Zero(d, d),
           e21 = MatrixXc::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    e11(k, k) = c1 + k;
    e22(k, k) = c2 - k;
    if (k + 1 < d) e12(k + 1, k) = std::sqrt(k + 1.0);
    if (k > 0) e21(k - 1, k) = std::sqrt(static_cast<double>(k)) * (-(c1 - c2) - (k - 1));
  }
  E[{0, 0}] = e11;
  E[{1, 1}] = e22;
  E[{0, 1}] = e12;
  E[{1, 0}] = e21;
  return E;
}

double verify_split_gl2(int two_j, int L, const Twists &tw, cplx z) {
  const Grading g(2, 0);
  const Subset full = Subset::full(2);
  const double j = 0.5 * two_j;
  const MatrixXc Tp = x_plus_operator(g, full, {j, -j}, L, tw, z).matrix;
  const MatrixXc Tsub = x_plus_operator(g, full, {-j - 1, j + 1}, L, tw, z).matrix;
  const ModuleSpec rep = ModuleSpec::explicit_table(gl2_finite_table(two_j), std::vector<int>(two_j + 1, 0));
  const MatrixXc Tj = t_operator(g, rep, L, tw, z).matrix;
  return max_abs(Tp - Tj - Tsub);
}

}  // namespace qop
