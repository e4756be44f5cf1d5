#include "qop/graded.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qop {

Grading::Grading(int n_, int m_) : n(n_), m(m_) {
  if (n < 0 || m < 0 || n + m < 1)
    throw std::invalid_argument("grading: need n >= 0, m >= 0, n + m >= 1");
}

std::vector<int> Grading::parities() const {
  std::vector<int> p(size());
  for (int a = 0; a < size(); ++a) p[a] = parity(a);
  return p;
}

Twists Twists::generic(int N) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  Twists t;
  for (int a = 1; a <= N; ++a)
    t.phi.push_back(std::fmod(a * golden * 2.0 * std::numbers::pi / (N + 1), 2.0 * std::numbers::pi));
  return t;
}

void Twists::require_distinct(double tol) const {
  for (int a = 0; a < size(); ++a)
    for (int b = a + 1; b < size(); ++b) {
      double d = std::remainder(phi[a] - phi[b], 2.0 * std::numbers::pi);
      if (std::abs(d) < tol) {
        std::ostringstream os;
        os << "coincident twists: phi_" << a + 1 << " = phi_" << b + 1 << " (mod 2pi)";
        throw singular_twist(a, b, os.str());
      }
    }
}

Twists Twists::scaled(double t) const {
  Twists out = *this;
  for (double &x : out.phi) x *= t;
  return out;
}

cplx sine_factor(const Twists &tw, int a, int b) {
  return cplx(0.0, 2.0 * std::sin((tw[a] - tw[b]) / 2.0));
}

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<int> site_labels(int index, int N, int L) {
  std::vector<int> s(L);
  for (int l = L - 1; l >= 0; --l) {
    s[l] = index % N;
    index /= N;
  }
  return s;
}

int basis_index(const std::vector<int> &labels, int N) {
  int idx = 0;
  for (int a : labels) idx = idx * N + a;
  return idx;
}

std::vector<int> basis_parities(const Grading &g, int L) {
  const int dim = ipow(g.size(), L);
  std::vector<int> par(dim);
  for (int i = 0; i < dim; ++i) {
    int p = 0;
    for (int a : site_labels(i, g.size(), L)) p ^= g.parity(a);
    par[i] = p;
  }
  return par;
}

std::vector<int> power_parities(const Grading &g, Eigen::Index dim) {
  int L = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d *= g.size();
    ++L;
  }
  if (d != dim) throw std::invalid_argument("dimension is not a power of n+m");
  return basis_parities(g, L);
}

std::vector<int> occupation(const Grading &g, int L, int index) {
  std::vector<int> occ(g.size(), 0);
  for (int a : site_labels(index, g.size(), L)) ++occ[a];
  return occ;
}

std::map<std::vector<int>, std::vector<int>> occupation_sectors(const Grading &g, int L) {
  std::map<std::vector<int>, std::vector<int>> sectors;
  const int dim = ipow(g.size(), L);
  for (int i = 0; i < dim; ++i) sectors[occupation(g, L, i)].push_back(i);
  return sectors;
}

namespace {

int fermions_before(const Grading &g, const std::vector<int> &s, int l) {
  int c = 0;
  for (int j = 0; j < l; ++j) c += g.parity(s[j]);
  return c;
}

}  // namespace

MatrixXc hamiltonian_direct(const Grading &g, int L, const Twists &tw) {
  if (L < 2) throw std::invalid_argument("hamiltonian: L must be >= 2");
  if (tw.size() != g.size()) throw std::invalid_argument("hamiltonian: twist count != n+m");
  const int N = g.size(), dim = ipow(N, L);
  MatrixXc H = MatrixXc::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::vector<int> s = site_labels(i, N, L);
    H(i, i) += 2.0 * L;
    for (int l = 0; l < L; ++l) {
      const int lp = (l + 1) % L;
      // e^(l)_AB e^(l+1)_BA: needs s[lp] = A, s[l] = B
      const int A = s[lp], B = s[l];
      const int pu = g.parity(A) ^ g.parity(B);
      std::vector<int> t = s;
      int sign = pu * fermions_before(g, t, lp);
      t[lp] = B;
      sign += pu * fermions_before(g, t, l);
      t[l] = A;
      cplx c = (g.parity(B) ? 2.0 : -2.0) * ((sign & 1) ? -1.0 : 1.0);
      if (lp == 0) c *= std::polar(1.0, tw[B] - tw[A]);
      H(basis_index(t, N), i) += c;
    }
  }
  return H;
}

MatrixXc hamiltonian_permutation(const Grading &g, int L, const Twists &tw) {
  if (L < 2) throw std::invalid_argument("hamiltonian: L must be >= 2");
  if (tw.size() != g.size()) throw std::invalid_argument("hamiltonian: twist count != n+m");
  const int N = g.size(), dim = ipow(N, L);
  MatrixXc H = MatrixXc::Identity(dim, dim) * (2.0 * L);
  for (int i = 0; i < dim; ++i) {
    const std::vector<int> s = site_labels(i, N, L);
    for (int l = 0; l + 1 < L; ++l) {
      std::vector<int> t = s;
      std::swap(t[l], t[l + 1]);
      double sign = (g.parity(s[l]) & g.parity(s[l + 1])) ? -1.0 : 1.0;
      H(basis_index(t, N), i) -= 2.0 * sign;
    }
    // backward permutation P_{L,1}: exchange across the middle sites, twist phase attached
    const int x = s[0], y = s[L - 1];
    int middle = 0;
    for (int j = 1; j + 1 < L; ++j) middle += g.parity(s[j]);
    const int e = (g.parity(x) & g.parity(y)) + (g.parity(x) ^ g.parity(y)) * middle;
    std::vector<int> t = s;
    std::swap(t[0], t[L - 1]);
    H(basis_index(t, N), i) -= 2.0 * ((e & 1) ? -1.0 : 1.0) * std::polar(1.0, tw[y] - tw[x]);
  }
  return H;
}

MatrixXc build_hamiltonian(const Grading &g, int L, const Twists &tw) {
  MatrixXc H = hamiltonian_direct(g, L, tw);
  if (max_abs(H - hamiltonian_permutation(g, L, tw)) > 1e-12)
    throw std::logic_error("hamiltonian: direct and permutation forms disagree");
  return H;
}

MatrixXc global_generator(const Grading &g, int L, int a, int b) {
  const int N = g.size(), dim = ipow(N, L);
  MatrixXc E = MatrixXc::Zero(dim, dim);
  const int pu = g.parity(a) ^ g.parity(b);
  for (int i = 0; i < dim; ++i) {
    const std::vector<int> s = site_labels(i, N, L);
    for (int l = 0; l < L; ++l) {
      if (s[l] != b) continue;
      std::vector<int> t = s;
      t[l] = a;
      const int sign = pu * fermions_before(g, s, l);
      E(basis_index(t, N), i) += (sign & 1) ? -1.0 : 1.0;
    }
  }
  return E;
}

double max_abs(const MatrixXc &X) { return X.size() ? X.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace qop
