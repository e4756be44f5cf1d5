#include "oracles.hpp"

#include <cmath>

namespace qop::oracle {

namespace {

using lcplx = std::complex<long double>;

// Moments sum_k sign^k (q e^{-eps})^k k!/(k-s)!, s = 0..smax, over k <= K, divided by the s = 0 sum.
// <k| (a^dagger)^s a^s |k> = k!/(k-s)!; off-diagonal monomials have zero trace.
std::vector<lcplx> family_moments(bool fermion, cplx q, long double eps, int K, int smax) {
  const lcplx w = lcplx(q.real(), q.imag()) * std::exp(-eps);
  const int top = fermion ? 1 : K;
  // compensated sums: partial sums reach eps^{-smax-1} while the result stays O(1)
  std::vector<lcplx> m(smax + 1, lcplx(0)), carry(smax + 1, lcplx(0));
  lcplx wk = 1;
  for (int k = 0; k <= top; ++k, wk *= w) {
    const lcplx base = (fermion && (k & 1)) ? -wk : wk;
    long double ff = 1;
    for (int s = 0; s <= smax && s <= k; ++s) {
      const lcplx y = ff * base - carry[s], t = m[s] + y;
      carry[s] = (t - m[s]) - y;
      m[s] = t;
      ff *= static_cast<long double>(k - s);
    }
  }
  for (int s = smax; s >= 0; --s) m[s] /= m[0];
  return m;
}

lcplx damped_trace(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q, int K, long double eps) {
  std::vector<int> smax(fs.size(), 0);
  for (const auto &[m, c] : x.terms)
    for (int f = 0; f < fs.size(); ++f) smax[f] = std::max<int>(smax[f], m[2 * f]);
  std::vector<std::vector<lcplx>> mom(fs.size());
  for (int f = 0; f < fs.size(); ++f)
    mom[f] = family_moments(fs.fermionic(f), q[f], eps * std::abs(1.0 - q[f]), K, smax[f]);
  lcplx total = 0;
  for (const auto &[m, c] : x.terms) {
    lcplx v(c.real(), c.imag());
    for (int f = 0; f < fs.size(); ++f) {
      if (m[2 * f] != m[2 * f + 1] || (fs.fermionic(f) && m[2 * f] > 1)) {
        v = 0;
        break;
      }
      v *= mom[f][m[2 * f]];
    }
    total += v;
  }
  return total;
}

}  // namespace

cplx abel_oracle(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q, int cutoff, double damping,
                 int levels, double tol) {
  if (levels < 2) throw std::invalid_argument("abel_oracle: need at least two damping values");
  int top = 0;
  for (const auto &[m, c] : x.terms)
    for (std::uint8_t e : m) top = std::max<int>(top, e);
  if (cutoff < top + 8) throw std::invalid_argument("abel_oracle: cutoff below max exponent + 8");
  // Richardson tableau in eps, halving each level
  std::vector<std::vector<lcplx>> T(levels);
  for (int k = 0; k < levels; ++k) {
    T[k].push_back(damped_trace(fs, x, q, cutoff, static_cast<long double>(damping) / (1 << k)));
    for (int j = 1; j <= k; ++j) {
      const long double p = static_cast<long double>(1 << j);
      T[k].push_back((p * T[k][j - 1] - T[k - 1][j - 1]) / (p - 1));
    }
  }
  const lcplx best = T[levels - 1][levels - 1], prev = T[levels - 2][levels - 2];
  const long double scale = std::max<long double>(1, std::abs(best));
  if (std::abs(best - prev) > tol * scale) throw oracle_failure("abel_oracle: extrapolation not converged");
  return {static_cast<double>(best.real()), static_cast<double>(best.imag())};
}

MatrixXc site_transposition(const Grading &g, int L, int i, int j) {
  if (i > j) std::swap(i, j);
  const int N = g.size(), dim = ipow(N, L);
  MatrixXc P = MatrixXc::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    std::vector<int> a = site_labels(col, N, L);
    int between = 0;
    for (int k = i + 1; k < j; ++k) between += g.parity(a[k]);
    const int pi = g.parity(a[i]), pj = g.parity(a[j]);
    const int sign = (pi * pj + (pi + pj) * between) & 1;
    std::swap(a[i], a[j]);
    P(basis_index(a, N), col) = sign ? -1.0 : 1.0;
  }
  return P;
}

MatrixXc on_site(const Grading &g, int L, int site, const MatrixXc &X) {
  const int N = g.size(), dim = ipow(N, L);
  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    std::vector<int> a = site_labels(col, N, L);
    int before = 0;
    for (int k = 0; k < site; ++k) before += g.parity(a[k]);
    const int old = a[site];
    for (int b = 0; b < N; ++b) {
      if (X(b, old) == 0.0) continue;
      a[site] = b;
      const int sign = ((g.parity(b) + g.parity(old)) * before) & 1;
      out(basis_index(a, N), col) += (sign ? -1.0 : 1.0) * X(b, old);
    }
  }
  return out;
}

MatrixXc triple_kron(const Grading &g, const MatrixXc &X, const MatrixXc &Y, const MatrixXc &Z) {
  const int N = g.size();
  const std::vector<const MatrixXc *> fac{&X, &Y, &Z};
  MatrixXc out(N * N * N, N * N * N);
  for (int row = 0; row < N * N * N; ++row)
    for (int col = 0; col < N * N * N; ++col) {
      const std::vector<int> r = site_labels(row, N, 3), c = site_labels(col, N, 3);
      cplx v = 1.0;
      int sign = 0;
      for (int i = 0; i < 3; ++i) {
        v *= (*fac[i])(r[i], c[i]);
        for (int j = i + 1; j < 3; ++j) sign += g.parity(c[i]) * (g.parity(r[j]) + g.parity(c[j]));
      }
      out(row, col) = (sign & 1) ? -v : v;
    }
  return out;
}

MatrixXc hamiltonian_from_units(const Grading &g, int L, const Twists &tw) {
  const int N = g.size(), dim = ipow(N, L);
  std::vector<std::vector<MatrixXc>> E(L, std::vector<MatrixXc>(N * N));
  for (int l = 0; l < L; ++l)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        MatrixXc u = MatrixXc::Zero(N, N);
        u(a, b) = 1.0;
        E[l][a * N + b] = on_site(g, L, l, u);
      }
  MatrixXc H = MatrixXc::Zero(dim, dim);
  for (int l = 0; l < L; ++l) {
    const int next = (l + 1) % L;
    H += 2.0 * MatrixXc::Identity(dim, dim);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        // e^(L+1)_BA = e^{i(Phi_B - Phi_A)} e^(1)_BA
        const cplx phase = next == 0 ? std::exp(cplx(0.0, tw[b] - tw[a])) : cplx(1.0);
        H -= 2.0 * (g.parity(b) ? -1.0 : 1.0) * phase * E[l][a * N + b] * E[next][b * N + a];
      }
  }
  return H;
}

TraceCase random_trace_case(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> nfam(1, 3), coin(0, 1), nterms(1, 4);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  TraceCase tc;
  const int F = nfam(rng);
  for (int f = 0; f < F; ++f) {
    tc.fs.add(OscFamily{0, f + 1, coin(rng) ? Stat::fermion : Stat::boson, 0, false});
    cplx q;
    do q = std::polar(1.0, angle(rng));
    while (std::abs(1.0 - q) <= 0.1);
    tc.q.push_back(q);
  }
  const int T = nterms(rng);
  for (int t = 0; t < T; ++t) {
    Monomial mono(2 * F, 0);
    int budget = 6;
    const bool diagonal = std::uniform_int_distribution<int>(0, 3)(rng) != 0;
    for (int f = 0; f < F; ++f) {
      const int cap = tc.fs.fermionic(f) ? 1 : 3;
      const int r = std::min({cap, budget / 2, std::uniform_int_distribution<int>(0, cap)(rng)});
      int s = r;
      if (!diagonal) s = std::min(cap, std::uniform_int_distribution<int>(0, cap)(rng));
      if (r + s > budget) s = budget - r;
      mono[2 * f] = static_cast<std::uint8_t>(r);
      mono[2 * f + 1] = static_cast<std::uint8_t>(s);
      budget -= r + s;
    }
    tc.x = osc_add(tc.x, osc_monomial(tc.fs, mono, random_complex(rng)));
  }
  return tc;
}

cplx abel_reference(const TraceCase &tc, double tol) {
  double gap = 2.0;
  for (const cplx &q : tc.q) gap = std::min(gap, std::abs(1.0 - q));
  const int levels = 5;
  const double damping = 0.02;
  const int cutoff = static_cast<int>(60.0 * (1 << (levels - 1)) / (damping * gap)) + 16;
  return abel_oracle(tc.fs, tc.x, tc.q, cutoff, damping, levels, tol);
}

MatrixXc fundamental_transfer_dense(const Grading &g, int L, const Twists &tw, cplx z) {
  const int N = g.size(), dim = ipow(N, L + 1), dq = ipow(N, L);
  MatrixXc D = MatrixXc::Zero(N, N);
  cplx phase = 0.0;
  for (int a = 0; a < N; ++a) {
    D(a, a) = std::exp(cplx(0.0, -tw[a]));
    phase += (g.parity(a) ? -1.0 : 1.0) * tw[a];
  }
  MatrixXc M = on_site(g, L + 1, 0, D);
  for (int l = 1; l <= L; ++l) M = M * (z * MatrixXc::Identity(dim, dim) - site_transposition(g, L + 1, 0, l));
  MatrixXc T = MatrixXc::Zero(dq, dq);
  for (int a = 0; a < N; ++a) T += (g.parity(a) ? -1.0 : 1.0) * M.block(a * dq, a * dq, dq, dq);
  return std::exp(cplx(0.0, 1.0) * z * phase) * T;
}

MatrixXc fermion_fock_matrix(const FamilySet &fs, const OscElement &x) {
  const int F = fs.size(), dim = 1 << F;
  std::vector<MatrixXc> c(F, MatrixXc::Zero(dim, dim));
  for (int f = 0; f < F; ++f) {
    if (!fs.fermionic(f)) throw std::invalid_argument("fermion_fock_matrix: bosonic family");
    const int bit = 1 << (F - 1 - f);
    for (int st = 0; st < dim; ++st) {
      if (!(st & bit)) continue;
      int before = 0;
      for (int g = 0; g < f; ++g) before += (st >> (F - 1 - g)) & 1;
      c[f](st ^ bit, st) = (before & 1) ? -1.0 : 1.0;
    }
  }
  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (const auto &[m, coef] : x.terms) {
    MatrixXc t = MatrixXc::Identity(dim, dim);
    for (int f = 0; f < F; ++f) {
      for (int k = 0; k < m[2 * f]; ++k) t = t * c[f].adjoint();
      for (int k = 0; k < m[2 * f + 1]; ++k) t = t * c[f];
    }
    out += coef * t;
  }
  return out;
}

MatrixXc random_matrix(int dim, std::mt19937_64 &rng) {
  MatrixXc X(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) X(i, j) = random_complex(rng);
  return X;
}

cplx random_complex(std::mt19937_64 &rng, double scale) {
  std::uniform_real_distribution<double> U(-scale, scale);
  const double re = U(rng);
  return {re, U(rng)};
}

}  // namespace qop::oracle
