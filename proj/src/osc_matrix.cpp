#include "qop/osc_matrix.hpp"

#include <algorithm>

namespace qop {

int FactorLayout::dim() const {
  int d = 1;
  for (int x : dims) d *= x;
  return d;
}

std::vector<int> FactorLayout::digits(int index) const {
  std::vector<int> d(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    d[f] = index % dims[f];
    index /= dims[f];
  }
  return d;
}

int FactorLayout::index(const std::vector<int> &d) const {
  int idx = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) idx = idx * dims[f] + d[f];
  return idx;
}

std::vector<int> FactorLayout::flat_parities() const {
  std::vector<int> out(dim());
  for (int i = 0; i < dim(); ++i) {
    int p = 0;
    const std::vector<int> d = digits(i);
    for (std::size_t f = 0; f < dims.size(); ++f) p ^= par[f][d[f]];
    out[i] = p;
  }
  return out;
}

FactorLayout FactorLayout::chain(const Grading &g, int L) {
  FactorLayout lay;
  for (int l = 0; l < L; ++l) {
    lay.dims.push_back(g.size());
    lay.par.push_back(g.parities());
  }
  return lay;
}

OscMatrix osc_identity(const FamilySet &fs, int dim) {
  OscMatrix M(dim);
  for (int i = 0; i < dim; ++i) M(i, i) = osc_scalar(fs, 1.0);
  return M;
}

OscMatrix osc_sub(const OscMatrix &a, const OscMatrix &b) {
  if (a.dim != b.dim) throw std::invalid_argument("osc_sub: dimension mismatch");
  OscMatrix out(a.dim);
  for (std::size_t k = 0; k < a.e.size(); ++k) out.e[k] = osc_add(a.e[k], b.e[k], -1.0);
  return out;
}

double max_abs(const OscMatrix &a) {
  double mx = 0.0;
  for (const OscElement &x : a.e) mx = std::max(mx, osc_max_abs(x));
  return mx;
}

OscMatrix osc_matmul(const FamilySet &fs, const std::vector<int> &par, const OscMatrix &a,
                     const OscMatrix &b) {
  if (a.dim != b.dim || static_cast<int>(par.size()) != a.dim)
    throw std::invalid_argument("osc_matmul: dimension mismatch");
  const int d = a.dim;
  std::vector<std::vector<int>> brow(d);
  std::vector<OscElement> bgraded(b.e.size());
  for (int t = 0; t < d; ++t)
    for (int v = 0; v < d; ++v)
      if (!b(t, v).empty()) {
        brow[t].push_back(v);
        bgraded[static_cast<std::size_t>(t) * d + v] = osc_grade(fs, b(t, v));
      }
  OscMatrix out(d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) {
      const OscElement &x = a(s, t);
      if (x.empty()) continue;
      const bool flip = (par[s] ^ par[t]) != 0;
      for (int v : brow[t]) {
        const OscElement &y = flip ? bgraded[static_cast<std::size_t>(t) * d + v] : b(t, v);
        out(s, v) = osc_add(out(s, v), osc_mul(fs, x, y));
      }
    }
  return out;
}

OscMatrix embed_local(const OscMatrix &local, const std::vector<int> &positions,
                      const FactorLayout &layout) {
  const int nf = static_cast<int>(layout.dims.size());
  std::vector<int> others;
  for (int f = 0; f < nf; ++f)
    if (std::find(positions.begin(), positions.end(), f) == positions.end()) others.push_back(f);
  FactorLayout loc, rest;
  for (int f : positions) {
    loc.dims.push_back(layout.dims[f]);
    loc.par.push_back(layout.par[f]);
  }
  for (int f : others) {
    rest.dims.push_back(layout.dims[f]);
    rest.par.push_back(layout.par[f]);
  }
  if (loc.dim() != local.dim) throw std::invalid_argument("embed_local: local dimension mismatch");
  OscMatrix out(layout.dim());
  const int nrest = rest.dim();
  for (int la = 0; la < local.dim; ++la)
    for (int lb = 0; lb < local.dim; ++lb) {
      const OscElement &x = local(la, lb);
      if (x.empty()) continue;
      const std::vector<int> da = loc.digits(la), db = loc.digits(lb);
      for (int r = 0; r < nrest; ++r) {
        const std::vector<int> dr = rest.digits(r);
        std::vector<int> ga(nf), gb(nf);
        for (std::size_t k = 0; k < positions.size(); ++k) {
          ga[positions[k]] = da[k];
          gb[positions[k]] = db[k];
        }
        for (std::size_t k = 0; k < others.size(); ++k) ga[others[k]] = gb[others[k]] = dr[k];
        // Jordan-Wigner sign: each odd local unit passes the earlier non-local factors
        int sign = 0;
        for (std::size_t k = 0; k < positions.size(); ++k) {
          const int f = positions[k];
          if (!(layout.par[f][da[k]] ^ layout.par[f][db[k]])) continue;
          for (int v : others)
            if (v < f) sign += layout.par[v][gb[v]];
        }
        out(layout.index(ga), layout.index(gb)) = (sign & 1) ? osc_scale(x, -1.0) : x;
      }
    }
  return out;
}

}  // namespace qop
