#include "qop/transfer.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qop {

Monodromy monodromy(const LaxOperator &lax, int L) {
  if (L < 1) throw std::invalid_argument("monodromy: L must be >= 1");
  const Grading &g = lax.g;
  Monodromy out;
  out.fams = lax.fams;
  out.has_module = lax.has_module_factor();
  out.module_dim = lax.module_dim;
  if (out.has_module) {
    out.layout.dims.push_back(lax.module_dim);
    out.layout.par.push_back(lax.module_parity);
  }
  for (int l = 0; l < L; ++l) {
    out.layout.dims.push_back(g.size());
    out.layout.par.push_back(g.parities());
  }
  const std::vector<int> par = out.layout.flat_parities();
  auto site_factor = [&](int l) {
    const std::vector<int> pos = out.has_module ? std::vector<int>{0, l + 1} : std::vector<int>{l};
    return embed_local(lax.local, pos, out.layout);
  };
  out.M = site_factor(L - 1);
  for (int l = L - 2; l >= 0; --l) out.M = osc_matmul(out.fams, par, out.M, site_factor(l));
  return out;
}

cplx twist_prefactor(const Grading &g, const Subset &I, const Twists &tw, cplx z) {
  double s = 0.0;
  for (int a : I.members) s += (g.parity(a) ? -1.0 : 1.0) * tw[a];
  return std::exp(cplx(0.0, 1.0) * z * s);
}

namespace {

void check_twists(const Grading &g, const Twists &tw) {
  if (tw.size() != g.size()) throw std::invalid_argument("twists: need one angle per label");
}

std::vector<cplx> family_weights(const FamilySet &fs, const Twists &tw) {
  std::vector<cplx> q(fs.size());
  for (int f = 0; f < fs.size(); ++f) q[f] = std::exp(cplx(0.0, -(tw[fs[f].row] - tw[fs[f].col])));
  return q;
}

}  // namespace

TransferOperator q_operator(const Grading &g, const Subset &I, int L, const Twists &tw, cplx z) {
  check_twists(g, tw);
  const LaxOperator lax = lax_canonical(g, I, ModuleSpec::singlet(), z);
  const Monodromy mono = monodromy(lax, L);
  const std::vector<cplx> q = family_weights(mono.fams, tw);
  const cplx pref = twist_prefactor(g, I, tw, z);
  const int dim = mono.M.dim;
  MatrixXc Q = MatrixXc::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (!mono.M(i, j).empty()) Q(i, j) = pref * family_trace(mono.fams, mono.M(i, j), q);
  return TransferOperator{g, I, ModuleSpec::singlet(), L, tw, z, Q, true};
}

TransferOperator t_operator(const Grading &g, const ModuleSpec &rep, int L, const Twists &tw, cplx z) {
  check_twists(g, tw);
  const Subset full = Subset::full(g.size());
  if (rep.kind == ModuleKind::verma) throw std::invalid_argument("t_operator: module must be finite");
  if (rep.kind == ModuleKind::singlet) {
    TransferOperator t = q_operator(g, full, L, tw, z);
    t.mod = rep;
    return t;
  }
  const LaxOperator lax = lax_full(g, rep, z);
  const Monodromy mono = monodromy(lax, L);
  const int d = lax.module_dim;
  MatrixXc Dexp = MatrixXc::Zero(d, d);
  {
    const GeneratorTable E = rep.kind == ModuleKind::fundamental ? fundamental_generators(g) : rep.E;
    for (int a = 0; a < g.size(); ++a) Dexp += cplx(0.0, -tw[a]) * E.at({a, a});
  }
  const MatrixXc D = Dexp.exp();
  const int dq = ipow(g.size(), L);
  const std::vector<int> qpar = basis_parities(g, L);
  MatrixXc T = MatrixXc::Zero(dq, dq);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (D(i, k) == 0.0) continue;
      for (int s = 0; s < dq; ++s)
        for (int t = 0; t < dq; ++t) {
          const OscElement &x = mono.M(k * dq + s, i * dq + t);
          if (x.empty()) continue;
          const int sg = lax.module_parity[i] * (1 + qpar[s] + qpar[t]);
          T(s, t) += ((sg & 1) ? -1.0 : 1.0) * D(i, k) * family_trace(mono.fams, x, {});
        }
    }
  T *= twist_prefactor(g, full, tw, z);
  return TransferOperator{g, full, rep, L, tw, z, T, true};
}

TransferOperator x_plus_operator(const Grading &g, const Subset &I, const std::vector<cplx> &Lambda,
                                 int L, const Twists &tw, cplx z) {
  check_twists(g, tw);
  if (I.size() > 2) throw std::domain_error("x_plus_operator: |I| >= 3 is not supported");
  const ModuleSpec mod = ModuleSpec::verma(Lambda);
  const LaxOperator lax = lax_canonical(g, I, mod, z);
  const Monodromy mono = monodromy(lax, L);
  const std::vector<cplx> q = family_weights(mono.fams, tw);
  cplx phase = 0.0;
  for (int k = 0; k < I.size(); ++k) {
    const int a = I.members[k];
    const cplx c = (g.parity(a) ? 1.0 : -1.0) * Lambda[k];
    phase += tw[a] * c;
  }
  const cplx scal = std::exp(cplx(0.0, -1.0) * phase) * twist_prefactor(g, I, tw, z);
  const int dim = mono.M.dim;
  MatrixXc X = MatrixXc::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (!mono.M(i, j).empty()) X(i, j) = scal * module_trace(mono.fams, mono.M(i, j), q);
  return TransferOperator{g, I, mod, L, tw, z, X, true};
}

MatrixXc MatrixPolynomial::operator()(cplx z) const {
  if (coeffs.empty()) return MatrixXc();
  MatrixXc out = coeffs.back();
  for (int k = degree() - 1; k >= 0; --k) out = (out * z + coeffs[k]).eval();
  return out;
}

std::vector<cplx> interpolation_nodes(int L) {
  std::vector<cplx> z;
  for (int k = 0; k < L + 2; ++k) z.push_back(std::polar(1.37, 2.0 * std::numbers::pi * k / (L + 2)));
  return z;
}

MatrixPolynomial interpolate_polynomial(const std::vector<std::pair<cplx, MatrixXc>> &samples,
                                        double tol) {
  if (samples.size() < 2) throw std::invalid_argument("interpolate_polynomial: need >= 2 samples");
  const int n = static_cast<int>(samples.size()) - 1;
  const Eigen::Index r = samples[0].second.rows(), c = samples[0].second.cols();
  for (const auto &s : samples)
    if (s.second.rows() != r || s.second.cols() != c)
      throw std::invalid_argument("interpolate_polynomial: inconsistent sample shapes");
  MatrixXc V(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) V(i, k) = std::pow(samples[i].first, k);
  const MatrixXc Vinv = V.partialPivLu().inverse();
  MatrixPolynomial P;
  P.coeffs.assign(n, MatrixXc::Zero(r, c));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) P.coeffs[k] += Vinv(k, i) * samples[i].second;
  const auto &last = samples.back();
  const double scale = std::max(1.0, max_abs(last.second));
  if (max_abs(P(last.first) - last.second) > tol * scale)
    throw std::logic_error("interpolate_polynomial: degree overflow (extra sample mismatch)");
  return P;
}

int effective_degree(const MatrixPolynomial &P, double rel) {
  double scale = 0.0;
  for (const MatrixXc &c : P.coeffs) scale = std::max(scale, max_abs(c));
  for (int k = P.degree(); k > 0; --k)
    if (max_abs(P.coeffs[k]) > rel * scale) return k;
  return 0;
}

MatrixPolynomial operator_polynomial(const std::function<TransferOperator(cplx)> &build, int L,
                                     double tol) {
  std::vector<std::pair<cplx, MatrixXc>> samples;
  for (cplx z : interpolation_nodes(L)) {
    const TransferOperator t = build(z);
    samples.emplace_back(z, t.matrix / twist_prefactor(t.g, t.I, t.twists, z));
  }
  return interpolate_polynomial(samples, tol);
}

double off_sector_residual(const Grading &g, int L, const MatrixXc &X) {
  const int dim = static_cast<int>(X.rows());
  std::vector<std::vector<int>> occ(dim);
  for (int i = 0; i < dim; ++i) occ[i] = occupation(g, L, i);
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (occ[i] != occ[j]) worst = std::max(worst, std::abs(X(i, j)));
  return worst;
}

MatrixXc sector_block(const MatrixXc &X, const std::vector<int> &indices) {
  const Eigen::Index k = static_cast<Eigen::Index>(indices.size());
  MatrixXc B(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) B(i, j) = X(indices[i], indices[j]);
  return B;
}

cplx super_vandermonde(const Grading &g, const Subset &I, const Twists &tw) {
  cplx num = 1.0, den = 1.0;
  for (int i = 0; i < I.size(); ++i)
    for (int j = i + 1; j < I.size(); ++j) {
      const int a = I.members[i], b = I.members[j];
      const cplx s = sine_factor(tw, a, b);
      if (g.parity(a) == g.parity(b)) num *= s;
      else {
        if (std::abs(s) < 1e-12) {
          throw singular_twist(a, b, "singular twist: phi_" + std::to_string(a + 1) + " = phi_" +
                                         std::to_string(b + 1) + " in the super-Vandermonde factor");
        }
        den *= s;
      }
    }
  return num / den;
}

}  // namespace qop
