#include "qop/osc.hpp"

#include <cmath>
#include <sstream>

namespace qop {

int FamilySet::find(int row, int col, int copy) const {
  for (int f = 0; f < size(); ++f)
    if (fams_[f].row == row && fams_[f].col == col && fams_[f].copy == copy && !fams_[f].module)
      return f;
  return -1;
}

int FamilySet::add(const OscFamily &f) {
  fams_.push_back(f);
  return size() - 1;
}

OscElement osc_monomial(const FamilySet &fs, const Monomial &mono, cplx c) {
  OscElement e;
  if (c != 0.0) {
    Monomial m = mono;
    m.resize(2 * fs.size(), 0);
    e.terms.emplace(std::move(m), c);
  }
  return e;
}

OscElement osc_scalar(const FamilySet &fs, cplx c) { return osc_monomial(fs, Monomial{}, c); }

OscElement osc_create(const FamilySet &fs, int f) {
  Monomial m(2 * fs.size(), 0);
  m[2 * f] = 1;
  return osc_monomial(fs, m);
}

OscElement osc_annihilate(const FamilySet &fs, int f) {
  Monomial m(2 * fs.size(), 0);
  m[2 * f + 1] = 1;
  return osc_monomial(fs, m);
}

OscElement osc_add(const OscElement &a, const OscElement &b, cplx cb) {
  OscElement out = a;
  for (const auto &[mono, c] : b.terms) {
    auto it = out.terms.find(mono);
    if (it == out.terms.end()) {
      if (c * cb != 0.0) out.terms.emplace(mono, c * cb);
    } else {
      it->second += c * cb;
      if (it->second == 0.0) out.terms.erase(it);
    }
  }
  return out;
}

OscElement osc_scale(const OscElement &a, cplx c) {
  OscElement out;
  if (c == 0.0) return out;
  for (const auto &[mono, v] : a.terms) out.terms.emplace(mono, v * c);
  return out;
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

bool odd_in(const FamilySet &fs, const Monomial &m, int f) {
  return fs.fermionic(f) && ((m[2 * f] + m[2 * f + 1]) & 1);
}

}  // namespace

OscElement osc_mul(const FamilySet &fs, const OscElement &a, const OscElement &b) {
  const int F = fs.size();
  std::map<Monomial, cplx> acc;
  struct Partial {
    cplx c;
    Monomial m;
  };
  std::vector<Partial> cur, next;
  for (const auto &[m1, c1] : a.terms) {
    // odd families of the left factor, counted from the right
    std::vector<int> odd_after(F + 1, 0);
    for (int f = F - 1; f >= 0; --f) odd_after[f] = odd_after[f + 1] + (odd_in(fs, m1, f) ? 1 : 0);
    for (const auto &[m2, c2] : b.terms) {
      int sign = 0;
      for (int f = 0; f < F; ++f)
        if (odd_in(fs, m2, f)) sign += odd_after[f + 1];
      cur.assign(1, Partial{(sign & 1) ? -c1 * c2 : c1 * c2, Monomial(2 * F, 0)});
      for (int f = 0; f < F && !cur.empty(); ++f) {
        const int r1 = m1[2 * f], s1 = m1[2 * f + 1], r2 = m2[2 * f], s2 = m2[2 * f + 1];
        const bool ferm = fs.fermionic(f);
        next.clear();
        for (int k = 0; k <= std::min(s1, r2); ++k) {
          const int r = r1 + r2 - k, s = s1 + s2 - k;
          if (ferm && (r > 1 || s > 1)) continue;
          if (r > kMaxBosonExponent || s > kMaxBosonExponent)
            throw resource_error("oscillator exponent cap exceeded");
          double w = binom(s1, k) * binom(r2, k) * factorial(k);
          if (ferm && (((s1 - k) * (r2 - k)) & 1)) w = -w;
          for (const Partial &p : cur) {
            Partial q{p.c * w, p.m};
            q.m[2 * f] = static_cast<std::uint8_t>(r);
            q.m[2 * f + 1] = static_cast<std::uint8_t>(s);
            next.push_back(std::move(q));
          }
        }
        std::swap(cur, next);
      }
      for (Partial &p : cur) acc[std::move(p.m)] += p.c;
    }
  }
  OscElement out;
  for (auto &[m, c] : acc)
    if (c != 0.0) out.terms.emplace(m, c);
  return out;
}

int monomial_parity(const FamilySet &fs, const Monomial &mono) {
  int p = 0;
  for (int f = 0; f < fs.size(); ++f)
    if (odd_in(fs, mono, f)) p ^= 1;
  return p;
}

int osc_parity(const FamilySet &fs, const OscElement &a) {
  int p = -2;
  for (const auto &[m, c] : a.terms) {
    const int q = monomial_parity(fs, m);
    if (p == -2) p = q;
    else if (p != q) return -1;
  }
  return p == -2 ? 0 : p;
}

OscElement osc_supercommutator(const FamilySet &fs, const OscElement &a, const OscElement &b) {
  const int pa = osc_parity(fs, a), pb = osc_parity(fs, b);
  if (pa < 0 || pb < 0) throw std::invalid_argument("supercommutator needs homogeneous elements");
  return osc_add(osc_mul(fs, a, b), osc_mul(fs, b, a), (pa & pb) ? 1.0 : -1.0);
}

OscElement osc_grade(const FamilySet &fs, const OscElement &a) {
  OscElement out;
  for (const auto &[m, c] : a.terms) out.terms.emplace(m, monomial_parity(fs, m) ? -c : c);
  return out;
}

double osc_max_abs(const OscElement &a) {
  double mx = 0.0;
  for (const auto &[m, c] : a.terms) mx = std::max(mx, std::abs(c));
  return mx;
}

int osc_degree(const OscElement &a) {
  int d = 0;
  for (const auto &[m, c] : a.terms) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

OscElement osc_prune(const OscElement &a, double tol) {
  OscElement out;
  for (const auto &[m, c] : a.terms)
    if (std::abs(c) > tol) out.terms.emplace(m, c);
  return out;
}

namespace {

void check_weight(const FamilySet &fs, int f, cplx q) {
  if (std::abs(1.0 - q) < 1e-12) {
    std::ostringstream os;
    os << "singular twist: oscillator weight q = 1 for family (" << fs[f].row + 1 << ","
       << fs[f].col + 1 << ")";
    throw singular_twist(fs[f].row, fs[f].col, os.str());
  }
}

// k^(r) = k (k-1) ... (k-r+1) in the power basis (signed Stirling numbers of the first kind).
std::vector<cplx> falling_factorial_poly(int r) {
  std::vector<cplx> p{1.0};
  for (int i = 0; i < r; ++i) {
    std::vector<cplx> np(p.size() + 1, 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      np[j + 1] += p[j];
      np[j] -= static_cast<double>(i) * p[j];
    }
    p = std::move(np);
  }
  return p;
}

}  // namespace

cplx family_trace(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q) {
  if (static_cast<int>(q.size()) < fs.size())
    throw std::invalid_argument("family_trace: missing weights");
  for (int f = 0; f < fs.size(); ++f)
    if (!fs[f].module) check_weight(fs, f, q[f]);
  cplx total = 0.0;
  for (const auto &[m, c] : x.terms) {
    cplx v = c;
    for (int f = 0; f < fs.size() && v != 0.0; ++f) {
      if (fs[f].module) continue;
      const int r = m[2 * f], s = m[2 * f + 1];
      if (r != s) {
        v = 0.0;
        break;
      }
      if (r == 0) continue;
      const cplx ratio = q[f] / (1.0 - q[f]);
      if (fs.fermionic(f)) v *= -ratio;
      else v *= factorial(r) * std::pow(ratio, r);
    }
    total += v;
  }
  return total;
}

cplx verma_chain_trace(ModuleChain kind, cplx q, const std::vector<cplx> &poly) {
  if (kind == ModuleChain::gl11) {
    cplx p0 = poly.empty() ? 0.0 : poly[0], p1 = 0.0;
    for (const cplx &c : poly) p1 += c;
    return p0 - q * p1;
  }
  if (std::abs(1.0 - q) < 1e-12)
    throw singular_twist(-1, -1, "singular twist: Verma chain weight q = 1");
  // k^j = sum_i S(j,i) k^(i);  sum_k k^(i) q^k = i! q^i / (1-q)^{i+1}
  const int d = static_cast<int>(poly.size());
  std::vector<std::vector<double>> S(d, std::vector<double>(d, 0.0));
  if (d > 0) S[0][0] = 1.0;
  for (int j = 1; j < d; ++j)
    for (int i = 1; i <= j; ++i) S[j][i] = i * S[j - 1][i] + S[j - 1][i - 1];
  cplx total = 0.0;
  for (int j = 0; j < d; ++j) {
    if (poly[j] == 0.0) continue;
    cplx s = 0.0;
    for (int i = 0; i <= j; ++i)
      if (S[j][i] != 0.0) s += S[j][i] * factorial(i) * std::pow(q, i) / std::pow(1.0 - q, i + 1);
    total += poly[j] * s;
  }
  return total;
}

cplx module_trace(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q) {
  int mf = -1;
  for (int f = 0; f < fs.size(); ++f)
    if (fs[f].module) {
      if (mf >= 0) throw std::invalid_argument("module_trace: more than one module family");
      mf = f;
    }
  if (mf < 0) return family_trace(fs, x, q);
  const ModuleChain kind = fs.fermionic(mf) ? ModuleChain::gl11 : ModuleChain::gl2_verma;
  // group by module exponent, trace the rest per group
  std::map<int, OscElement> groups;
  for (const auto &[m, c] : x.terms) {
    if (m[2 * mf] != m[2 * mf + 1]) continue;
    Monomial rest = m;
    rest[2 * mf] = rest[2 * mf + 1] = 0;
    groups[m[2 * mf]].terms[rest] += c;
  }
  cplx total = 0.0;
  for (const auto &[r, el] : groups) {
    const cplx t = family_trace(fs, el, q);
    if (t == 0.0) continue;
    total += t * verma_chain_trace(kind, q[mf], falling_factorial_poly(r));
  }
  return total;
}

std::string to_string(const FamilySet &fs, const OscElement &a) {
  if (a.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[m, c] : a.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    for (int f = 0; f < fs.size(); ++f) {
      const char *name = fs[f].module ? "b" : (fs.fermionic(f) ? "c" : "a");
      if (m[2 * f]) os << " " << name << f << "+^" << int(m[2 * f]);
      if (m[2 * f + 1]) os << " " << name << f << "^" << int(m[2 * f + 1]);
    }
  }
  return os.str();
}

}  // namespace qop
