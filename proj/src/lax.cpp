#include "qop/lax.hpp"

#include <algorithm>
#include <sstream>

namespace qop {

Subset::Subset(std::vector<int> m) : members(std::move(m)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

Subset Subset::from_mask(unsigned mask, int N) {
  std::vector<int> m;
  for (int a = 0; a < N; ++a)
    if (mask & (1u << a)) m.push_back(a);
  return Subset(m);
}

Subset Subset::full(int N) { return from_mask((1u << N) - 1u, N); }

unsigned Subset::mask() const {
  unsigned k = 0;
  for (int a : members) k |= 1u << a;
  return k;
}

bool Subset::contains(int a) const { return std::binary_search(members.begin(), members.end(), a); }

Subset Subset::complement(int N) const {
  std::vector<int> c;
  for (int a = 0; a < N; ++a)
    if (!contains(a)) c.push_back(a);
  return Subset(c);
}

Subset Subset::with(int a) const {
  std::vector<int> m = members;
  m.push_back(a);
  return Subset(m);
}

std::string to_string(const Subset &I) {
  std::ostringstream os;
  os << "{";
  for (int k = 0; k < I.size(); ++k) os << (k ? "," : "") << I.members[k] + 1;
  os << "}";
  return os.str();
}

int lax_sign(const Grading &g, int a, int b) {
  return ((g.parity(a) & g.parity(b)) ^ g.parity(b)) ? -1 : 1;
}

FamilySet lax_families(const Grading &g, const Subset &I) {
  FamilySet fs;
  const Subset Ib = I.complement(g.size());
  for (int a : I.members)
    for (int d : Ib.members)
      fs.add(OscFamily{a, d, (g.parity(a) ^ g.parity(d)) ? Stat::fermion : Stat::boson, 0, false});
  return fs;
}

std::vector<OscElement> lax_entries(const Grading &g, const Subset &I, const FamilySet &fs,
                                    const std::function<int(int, int)> &family_of,
                                    const std::map<std::pair<int, int>, OscElement> *E, cplx z) {
  const int N = g.size();
  const Subset Ib = I.complement(N);
  std::vector<OscElement> L(static_cast<std::size_t>(N) * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const double sb = g.parity(b) ? -1.0 : 1.0;
      OscElement e;
      if (I.contains(a) && I.contains(b)) {
        OscElement h;
        for (int d : Ib.members) {
          h = osc_add(h, osc_mul(fs, osc_create(fs, family_of(a, d)), osc_annihilate(fs, family_of(b, d))));
          if (a == b) h = osc_add(h, osc_scalar(fs, 0.5 * ((g.parity(a) ^ g.parity(d)) ? -1.0 : 1.0)));
        }
        if (E) {
          auto it = E->find({a, b});
          if (it != E->end()) h = osc_add(h, it->second);
        }
        e = osc_add(a == b ? osc_scalar(fs, z) : OscElement{}, h, -sb);
      } else if (I.contains(a)) {
        e = osc_create(fs, family_of(a, b));
      } else if (I.contains(b)) {
        e = osc_scale(osc_annihilate(fs, family_of(b, a)), -sb);
      } else if (a == b) {
        e = osc_scalar(fs, 1.0);
      }
      L[a * N + b] = std::move(e);
    }
  return L;
}

GeneratorTable fundamental_generators(const Grading &g) {
  const int N = g.size();
  GeneratorTable E;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      MatrixXc e = MatrixXc::Zero(N, N);
      e(a, b) = 1.0;
      E[{a, b}] = e;
    }
  return E;
}

double generator_relation_residual(const Grading &g, const Subset &I, const GeneratorTable &E,
                                   const std::vector<int> &parity) {
  double worst = 0.0;
  const int d = static_cast<int>(parity.size());
  auto get = [&](int a, int b) -> MatrixXc {
    auto it = E.find({a, b});
    if (it == E.end()) throw std::invalid_argument("generator table incomplete");
    if (it->second.rows() != d || it->second.cols() != d)
      throw std::invalid_argument("generator table: wrong module dimension");
    return it->second;
  };
  for (int a : I.members)
    for (int b : I.members)
      for (int c : I.members)
        for (int e : I.members) {
          const int s = ((g.parity(a) ^ g.parity(b)) & (g.parity(c) ^ g.parity(e)));
          const double sg = s ? -1.0 : 1.0;
          MatrixXc lhs = get(a, b) * get(c, e) - sg * get(c, e) * get(a, b);
          MatrixXc rhs = MatrixXc::Zero(d, d);
          if (c == b) rhs += get(a, e);
          if (a == e) rhs -= sg * get(c, b);
          worst = std::max(worst, max_abs(lhs - rhs));
        }
  return worst;
}

void rebuild_local(LaxOperator &L) {
  const Grading &g = L.g;
  const int N = g.size();
  if (!L.has_module_factor()) {
    L.layout = FactorLayout{{N}, {g.parities()}};
    L.local = OscMatrix(N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) L.local(a, b) = osc_scale(L.entry(a, b), lax_sign(g, a, b));
    return;
  }
  const int d = L.module_dim;
  L.layout = FactorLayout{{d, N}, {L.module_parity, g.parities()}};
  L.local = OscMatrix(d * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const MatrixXc &M = L.module_entries[a * N + b];
      const int pu = g.parity(a) ^ g.parity(b);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (M(i, j) == 0.0) continue;
          double s = lax_sign(g, a, b);
          if (pu & L.module_parity[j]) s = -s;
          L.local(i * N + a, j * N + b) = osc_scalar(L.fams, s * M(i, j));
        }
    }
}

namespace {

void check_subset(const Grading &g, const Subset &I) {
  for (int a : I.members)
    if (a < 0 || a >= g.size()) throw std::invalid_argument("subset label out of range");
}

}  // namespace

LaxOperator lax_canonical(const Grading &g, const Subset &I, const ModuleSpec &mod, cplx z) {
  check_subset(g, I);
  if (mod.finite()) {
    if (I.size() != g.size())
      throw std::invalid_argument("finite modules are supported for the full set only");
    return lax_full(g, mod, z);
  }
  LaxOperator L{g, I, z, mod, lax_families(g, I), {}, {}, 1, {0}, {}, {}};
  std::map<std::pair<int, int>, OscElement> E;
  if (mod.kind == ModuleKind::verma) {
    if (static_cast<int>(mod.lambda.size()) != I.size())
      throw std::invalid_argument("verma module: need one weight per member of I");
    if (I.size() > 2) throw std::domain_error("verma module: |I| >= 3 is not supported");
    std::vector<cplx> c;
    for (int k = 0; k < I.size(); ++k)
      c.push_back((g.parity(I.members[k]) ? 1.0 : -1.0) * mod.lambda[k]);
    if (I.size() == 1) {
      E[{I.members[0], I.members[0]}] = osc_scalar(L.fams, c[0]);
    } else if (I.size() == 2) {
      const int a1 = I.members[0], a2 = I.members[1];
      const bool mixed = g.parity(a1) != g.parity(a2);
      const int mf = L.fams.add(OscFamily{a1, a2, mixed ? Stat::fermion : Stat::boson, 0, true});
      const FamilySet &fs = L.fams;
      const OscElement num = osc_mul(fs, osc_create(fs, mf), osc_annihilate(fs, mf));
      E[{a1, a1}] = osc_add(osc_scalar(fs, c[0]), num);
      E[{a2, a2}] = osc_add(osc_scalar(fs, c[1]), num, -1.0);
      E[{a1, a2}] = osc_create(fs, mf);
      if (mixed) {
        E[{a2, a1}] = osc_scale(osc_annihilate(fs, mf), c[0] + c[1]);
      } else {
        Monomial m(2 * fs.size(), 0);
        m[2 * mf] = 1;
        m[2 * mf + 1] = 2;
        E[{a2, a1}] = osc_add(osc_scale(osc_annihilate(fs, mf), -(c[0] - c[1])), osc_monomial(fs, m), -1.0);
      }
    }
  }
  const FamilySet &fs = L.fams;
  auto family_of = [&](int a, int d) { return fs.find(a, d); };
  L.entries = lax_entries(g, I, fs, family_of, E.empty() ? nullptr : &E, z);
  rebuild_local(L);
  return L;
}

LaxOperator lax_full(const Grading &g, const ModuleSpec &rep, cplx z) {
  const int N = g.size();
  const Subset I = Subset::full(N);
  if (!rep.finite()) return lax_canonical(g, I, rep, z);
  GeneratorTable E;
  std::vector<int> par;
  if (rep.kind == ModuleKind::fundamental) {
    E = fundamental_generators(g);
    par = g.parities();
  } else {
    E = rep.E;
    par = rep.parity;
    if (par.empty()) throw std::invalid_argument("explicit module: empty basis");
    if (generator_relation_residual(g, I, E, par) > 1e-12)
      throw std::invalid_argument("explicit module violates the gl(n|m) relations");
  }
  const int d = static_cast<int>(par.size());
  LaxOperator L{g, I, z, rep, FamilySet{}, {}, {}, d, par, {}, {}};
  L.module_entries.resize(static_cast<std::size_t>(N) * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      MatrixXc M = -(g.parity(b) ? -1.0 : 1.0) * E.at({a, b});
      if (a == b) M.diagonal().array() += z;
      L.module_entries[a * N + b] = M;
    }
  rebuild_local(L);
  return L;
}

double ybe_residual(const LaxOperator &L1, const LaxOperator &L2) {
  const Grading &g = L1.g;
  const int N = g.size();
  const bool mod = L1.has_module_factor();
  FactorLayout lay;
  if (mod) {
    lay.dims = {L1.module_dim, N, N};
    lay.par = {L1.module_parity, g.parities(), g.parities()};
  } else {
    lay = FactorLayout::chain(g, 2);
  }
  const std::vector<int> par = lay.flat_parities();
  const FamilySet &fs = L1.fams;
  OscMatrix Rloc(N * N);
  const MatrixXc R = r_matrix<cplx>(g, L1.z - L2.z);
  for (int i = 0; i < N * N; ++i)
    for (int j = 0; j < N * N; ++j)
      if (R(i, j) != 0.0) Rloc(i, j) = osc_scalar(fs, R(i, j));
  const std::vector<int> p1 = mod ? std::vector<int>{0, 1} : std::vector<int>{0};
  const std::vector<int> p2 = mod ? std::vector<int>{0, 2} : std::vector<int>{1};
  const std::vector<int> pr = mod ? std::vector<int>{1, 2} : std::vector<int>{0, 1};
  const OscMatrix A = embed_local(L1.local, p1, lay);
  const OscMatrix B = embed_local(L2.local, p2, lay);
  const OscMatrix Rm = embed_local(Rloc, pr, lay);
  const OscMatrix lhs = osc_matmul(fs, par, osc_matmul(fs, par, Rm, A), B);
  const OscMatrix rhs = osc_matmul(fs, par, osc_matmul(fs, par, B, A), Rm);
  return max_abs(osc_sub(lhs, rhs));
}

double check_ybe(const Grading &g, const Subset &I, const ModuleSpec &mod, cplx z1, cplx z2) {
  return ybe_residual(lax_canonical(g, I, mod, z1), lax_canonical(g, I, mod, z2));
}

}  // namespace qop
