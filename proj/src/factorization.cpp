#include "qop/lax.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>

namespace qop {

namespace {

double sgn(int p) { return (p & 1) ? -1.0 : 1.0; }

std::vector<OscElement> mat_product(const FamilySet &fs, int N, const std::vector<OscElement> &a,
                                    const std::vector<OscElement> &b) {
  std::vector<OscElement> out(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const OscElement &x = a[i * N + k];
      if (x.empty()) continue;
      for (int j = 0; j < N; ++j)
        if (!b[k * N + j].empty()) out[i * N + j] = osc_add(out[i * N + j], osc_mul(fs, x, b[k * N + j]));
    }
  return out;
}

// Extended precision: the similarity transform sums large terms at high occupancy.
using lcplx = std::complex<long double>;
using Sparse = Eigen::SparseMatrix<lcplx>;

// Truncated Fock space: bosons bounded by total occupancy, fermions 0/1.
struct FockSpace {
  const FamilySet *fs = nullptr;
  std::vector<std::vector<int>> states;
  std::map<std::vector<int>, int> index;
  int cutoff = 0;

  FockSpace(const FamilySet &f, int cut) : fs(&f), cutoff(cut) {
    std::vector<int> occ(f.size(), 0);
    enumerate(0, 0, occ);
    for (std::size_t k = 0; k < states.size(); ++k) index[states[k]] = static_cast<int>(k);
  }

  void enumerate(int f, int total, std::vector<int> &occ) {
    if (f == fs->size()) {
      states.push_back(occ);
      return;
    }
    const int top = fs->fermionic(f) ? 1 : cutoff - total;
    for (int n = 0; n <= top && total + n <= cutoff; ++n) {
      occ[f] = n;
      enumerate(f + 1, total + n, occ);
    }
    occ[f] = 0;
  }

  static int total(const std::vector<int> &occ) {
    int t = 0;
    for (int n : occ) t += n;
    return t;
  }

  // P x P, each monomial acting exactly.
  Sparse matrix(const OscElement &x) const {
    std::vector<Eigen::Triplet<lcplx>> trips;
    const int F = fs->size();
    for (std::size_t col = 0; col < states.size(); ++col)
      for (const auto &[m, c] : x.terms) {
        std::vector<int> occ = states[col];
        lcplx v(c.real(), c.imag());
        for (int f = F - 1; f >= 0 && v != lcplx(0); --f) {
          const int r = m[2 * f], s = m[2 * f + 1];
          if (fs->fermionic(f)) {
            int jw = 0;
            for (int g = 0; g < f; ++g)
              if (fs->fermionic(g)) jw += occ[g];
            if (s) {
              if (s > 1 || occ[f] == 0) v = 0;
              else {
                occ[f] = 0;
                v *= sgn(jw);
              }
            }
            if (r && v != lcplx(0)) {
              if (r > 1 || occ[f] == 1) v = 0;
              else {
                occ[f] = 1;
                v *= sgn(jw);
              }
            }
          } else {
            if (occ[f] < s) {
              v = 0;
              break;
            }
            for (int k = 0; k < s; ++k) v *= std::sqrt(static_cast<long double>(occ[f] - k));
            occ[f] -= s;
            for (int k = 1; k <= r; ++k) v *= std::sqrt(static_cast<long double>(occ[f] + k));
            occ[f] += r;
          }
        }
        if (v == lcplx(0)) continue;
        auto it = index.find(occ);
        if (it == index.end()) continue;
        trips.emplace_back(it->second, static_cast<int>(col), v);
      }
    Sparse M(static_cast<int>(states.size()), static_cast<int>(states.size()));
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
  }
};

// exp(X) for X nilpotent on the truncated space.
Sparse nilpotent_exp(const Sparse &X) {
  Sparse out(X.rows(), X.cols());
  out.setIdentity();
  Sparse term = out;
  for (int k = 1; k <= X.rows() + 1; ++k) {
    term = Sparse(X * term) / lcplx(k);
    if (term.nonZeros() == 0) break;
    out += term;
  }
  return out;
}

// Largest net drop in total occupancy produced by a monomial of x.
int lowering_degree(const OscElement &x) {
  int d = 0;
  for (const auto &[m, c] : x.terms) {
    int net = 0;
    for (std::size_t k = 0; k < m.size(); k += 2) net += m[k + 1] - m[k];
    d = std::max(d, net);
  }
  return d;
}

}  // namespace

FusionData fusion_data(const Grading &g, const Subset &I, const Subset &J, cplx z, cplx lambda) {
  const int N = g.size();
  for (int a : I.members)
    if (J.contains(a)) throw std::invalid_argument("fusion: I and J must be disjoint");
  if (I.size() == 0 || J.size() == 0) throw std::invalid_argument("fusion: I and J must be non-empty");
  std::vector<int> all = I.members;
  all.insert(all.end(), J.members.begin(), J.members.end());
  const Subset IJ(all);
  const Subset K = IJ.complement(N), Ib = I.complement(N), Jb = J.complement(N);
  auto p = [&](int a) { return g.parity(a); };

  FusionData out;
  FamilySet &fs = out.fams;
  for (int a : I.members)
    for (int d : Ib.members) fs.add(OscFamily{a, d, (p(a) ^ p(d)) ? Stat::fermion : Stat::boson, 1, false});
  for (int a : J.members)
    for (int d : Jb.members) fs.add(OscFamily{a, d, (p(a) ^ p(d)) ? Stat::fermion : Stat::boson, 2, false});
  auto f1 = [&](int a, int d) { return fs.find(a, d, 1); };
  auto f2 = [&](int a, int d) { return fs.find(a, d, 2); };
  auto cr1 = [&](int a, int d) { return osc_create(fs, f1(a, d)); };
  auto an1 = [&](int a, int d) { return osc_annihilate(fs, f1(a, d)); };

  double sI = 0.0, sJ = 0.0;
  for (int a : I.members) sI += sgn(p(a));
  for (int a : J.members) sJ += sgn(p(a));

  const auto L1 = lax_entries(g, I, fs, f1, nullptr, z + 0.5 * sJ);
  const auto L2 = lax_entries(g, J, fs, f2, nullptr, z - lambda - 0.5 * sI);
  out.lhs = mat_product(fs, N, L1, L2);

  auto &E = out.induced;
  for (int a : I.members) {
    for (int b : I.members) {
      OscElement x;
      for (int c : J.members) x = osc_add(x, osc_mul(fs, cr1(a, c), an1(b, c)));
      E[{a, b}] = x;
    }
    for (int b : J.members) {
      OscElement x = osc_scale(cr1(a, b), sgn(p(b)) * lambda);
      for (int d : J.members)
        for (int c : I.members) {
          const double s = sgn((p(b) ^ p(d)) & (p(b) ^ p(c)));
          x = osc_add(x, osc_mul(fs, osc_mul(fs, cr1(a, d), cr1(c, b)), an1(c, d)), -s);
        }
      E[{a, b}] = x;
    }
  }
  for (int a : J.members) {
    for (int b : I.members) E[{a, b}] = an1(b, a);
    for (int b : J.members) {
      OscElement x = a == b ? osc_scalar(fs, lambda * sgn(p(b))) : OscElement{};
      for (int c : I.members) {
        const double s = sgn((p(a) ^ p(b)) & (p(b) ^ p(c)));
        x = osc_add(x, osc_mul(fs, cr1(c, b), an1(c, a)), -s);
      }
      E[{a, b}] = x;
    }
  }

  auto fx = [&](int a, int c) { return I.contains(a) ? f1(a, c) : f2(a, c); };
  const auto LIJ = lax_entries(g, IJ, fs, fx, &E, z);
  std::vector<OscElement> G(static_cast<std::size_t>(N) * N);
  for (int a = 0; a < N; ++a) G[a * N + a] = osc_scalar(fs, 1.0);
  for (int a : I.members)
    for (int b : J.members) G[a * N + b] = osc_scale(osc_annihilate(fs, f2(b, a)), -sgn(p(b)));
  out.core = mat_product(fs, N, LIJ, G);

  OscElement X;
  for (int a : I.members)
    for (int b : J.members) {
      X = osc_add(X, osc_mul(fs, cr1(a, b), osc_create(fs, f2(b, a))), sgn(p(a)));
      for (int c : K.members)
        X = osc_add(X, osc_mul(fs, osc_mul(fs, cr1(a, b), osc_create(fs, f2(b, c))), an1(a, c)));
    }
  out.s_exponent = X;
  return out;
}

FactorizationResult verify_factorization(const Grading &g, const Subset &I, const Subset &J, cplx z,
                                         cplx lambda, int cutoff) {
  const FusionData fd = fusion_data(g, I, J, z, lambda);
  const FamilySet &fs = fd.fams;
  bool any_boson = false;
  for (int f = 0; f < fs.size(); ++f) any_boson = any_boson || !fs.fermionic(f);
  const int cut = any_boson ? cutoff : fs.size();
  int guard = 0;
  for (const OscElement &x : fd.core) guard = std::max(guard, lowering_degree(x));
  if (any_boson && cut - guard < 0) throw std::invalid_argument("factorization: cutoff too small");

  const FockSpace space(fs, cut);
  const Sparse S = nilpotent_exp(space.matrix(fd.s_exponent));
  const Sparse Si = nilpotent_exp(-space.matrix(fd.s_exponent));
  std::vector<char> win(space.states.size());
  FactorizationResult res;
  res.total_states = static_cast<int>(space.states.size());
  res.exact = !any_boson;
  for (std::size_t k = 0; k < win.size(); ++k) {
    win[k] = !any_boson || FockSpace::total(space.states[k]) <= cut - guard;
    res.window_states += win[k];
  }
  const int N = g.size();
  for (int k = 0; k < N * N; ++k) {
    const Sparse D = space.matrix(fd.lhs[k]) - Sparse(S * space.matrix(fd.core[k]) * Si);
    for (int c = 0; c < D.outerSize(); ++c)
      for (Sparse::InnerIterator it(D, c); it; ++it)
        if (win[it.row()] && win[it.col()]) res.residual = std::max(res.residual, static_cast<double>(std::abs(it.value())));
  }
  return res;
}

}  // namespace qop
