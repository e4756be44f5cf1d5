#include "qop/bethe.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace qop {

int EigenBasis::size() const {
  int s = 0;
  for (const EigenSector &sec : sectors) s += static_cast<int>(sec.indices.size());
  return s;
}

namespace {

double relative_offdiag(const MatrixXc &W) {
  double off = 0.0, diag = 1.0;
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      if (i == j) diag = std::max(diag, std::abs(W(i, j)));
      else off = std::max(off, std::abs(W(i, j)));
    }
  return off / diag;
}

std::string occupation_string(const std::vector<int> &occ) {
  std::string s = "(";
  for (std::size_t k = 0; k < occ.size(); ++k) s += (k ? "," : "") + std::to_string(occ[k]);
  return s + ")";
}

}  // namespace

EigenBasis common_eigenbasis(const Grading &g, int L, const Twists &tw, std::uint64_t seed) {
  EigenBasis basis{g, L, tw, build_hamiltonian(g, L, tw), {}, 0.0};
  const int N = g.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> coef(1u << N);
  for (cplx &c : coef) c = cplx(U(rng), U(rng));
  const std::vector<cplx> probes{{0.37, 0.21}, {-0.53, 0.44}, {0.81, -0.29}};
  const auto sectors = occupation_sectors(g, L);
  std::vector<int> failing;
  for (cplx z0 : probes) {
    std::vector<MatrixXc> Qs;
    try {
      for (unsigned k = 0; k < (1u << N); ++k) Qs.push_back(q_operator(g, Subset::from_mask(k, N), L, tw, z0).matrix);
    } catch (const singular_twist &e) {
      throw degeneracy_error({}, std::string("cannot split degeneracies: ") + e.what());
    }
    MatrixXc A = basis.H;
    for (std::size_t k = 0; k < Qs.size(); ++k) A += 0.1 * coef[k] * Qs[k] / std::max(1.0, max_abs(Qs[k]));
    basis.sectors.clear();
    basis.probe_offdiag = 0.0;
    bool ok = true;
    for (const auto &[occ, idx] : sectors) {
      Eigen::ComplexEigenSolver<MatrixXc> es(sector_block(A, idx));
      EigenSector sec{occ, idx, es.eigenvectors(), MatrixXc(), Eigen::VectorXd()};
      sec.Vinv = sec.V.inverse();
      const MatrixXc Hd = sec.Vinv * sector_block(basis.H, idx) * sec.V;
      double worst = relative_offdiag(Hd);
      for (const MatrixXc &Q : Qs) worst = std::max(worst, relative_offdiag(sec.Vinv * sector_block(Q, idx) * sec.V));
      basis.probe_offdiag = std::max(basis.probe_offdiag, worst);
      if (worst > 1e-8) {
        ok = false;
        failing = occ;
        break;
      }
      const Eigen::Index k = Hd.rows();
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) { return Hd(x, x).real() < Hd(y, y).real(); });
      MatrixXc V(k, k), Vinv(k, k);
      sec.energies.resize(k);
      for (Eigen::Index c = 0; c < k; ++c) {
        V.col(c) = sec.V.col(perm[c]);
        Vinv.row(c) = sec.Vinv.row(perm[c]);
        sec.energies(c) = Hd(perm[c], perm[c]).real();
      }
      sec.V = V;
      sec.Vinv = Vinv;
      basis.sectors.push_back(std::move(sec));
    }
    if (ok) return basis;
  }
  throw degeneracy_error(failing, "unresolved degeneracy in sector " + occupation_string(failing));
}

VectorXc diagonal_values(const EigenBasis &basis, const MatrixXc &X, double *offdiag) {
  VectorXc out(basis.size());
  Eigen::Index pos = 0;
  double worst = 0.0;
  for (const EigenSector &sec : basis.sectors) {
    const MatrixXc W = sec.Vinv * sector_block(X, sec.indices) * sec.V;
    worst = std::max(worst, relative_offdiag(W));
    out.segment(pos, W.rows()) = W.diagonal();
    pos += W.rows();
  }
  if (offdiag) *offdiag = worst;
  return out;
}

std::vector<std::vector<cplx>> q_eigen_polynomials(const EigenBasis &basis, const Subset &I, double trim) {
  std::vector<std::pair<cplx, MatrixXc>> samples;
  for (cplx z : interpolation_nodes(basis.L)) {
    const MatrixXc Q = q_operator(basis.g, I, basis.L, basis.twists, z).matrix;
    samples.emplace_back(z, MatrixXc(diagonal_values(basis, Q) / twist_prefactor(basis.g, I, basis.twists, z)));
  }
  const MatrixPolynomial P = interpolate_polynomial(samples, 1e-8);
  std::vector<std::vector<cplx>> out(basis.size());
  for (int s = 0; s < basis.size(); ++s) {
    std::vector<cplx> c;
    double scale = 1.0;
    for (const MatrixXc &m : P.coeffs) {
      c.push_back(m(s, 0));
      scale = std::max(scale, std::abs(m(s, 0)));
    }
    while (c.size() > 1 && std::abs(c.back()) <= trim * scale) c.pop_back();
    out[s] = std::move(c);
  }
  return out;
}

cplx poly_eval(const std::vector<cplx> &c, cplx z) {
  cplx v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

std::vector<cplx> extract_bethe_roots(const std::vector<cplx> &poly) {
  const int d = static_cast<int>(poly.size()) - 1;
  if (d <= 0) return {};
  std::vector<cplx> roots;
  if (d == 1) {
    roots.push_back(-poly[0] / poly[1]);
  } else {
    Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver;
    solver.compute(Eigen::Map<const VectorXc>(poly.data(), d + 1));
    for (Eigen::Index k = 0; k < solver.roots().size(); ++k) roots.push_back(solver.roots()(k));
  }
  std::vector<cplx> deriv;
  for (int k = 1; k <= d; ++k) deriv.push_back(static_cast<double>(k) * poly[k]);
  for (cplx &r : roots)
    for (int step = 0; step < 2; ++step) {
      const cplx dp = poly_eval(deriv, r);
      if (std::abs(dp) > 0.0) r -= poly_eval(poly, r) / dp;
    }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

cplx q_function(const Grading &g, const Subset &I, const Twists &tw, const std::vector<cplx> &poly, cplx z) {
  return twist_prefactor(g, I, tw, z) * poly_eval(poly, z);
}

std::vector<SpectrumRecord> spectrum_records(const EigenBasis &basis) {
  const int N = basis.g.size();
  std::vector<SpectrumRecord> recs;
  for (std::size_t s = 0; s < basis.sectors.size(); ++s)
    for (Eigen::Index k = 0; k < basis.sectors[s].energies.size(); ++k)
      recs.push_back(SpectrumRecord{basis.sectors[s].occupation, static_cast<int>(s), static_cast<int>(k),
                                    basis.sectors[s].energies(k), {}, {}});
  for (unsigned mask = 0; mask < (1u << N); ++mask) {
    const Subset I = Subset::from_mask(mask, N);
    const auto polys = q_eigen_polynomials(basis, I);
    for (std::size_t s = 0; s < recs.size(); ++s) {
      recs[s].poly[I] = polys[s];
      recs[s].roots[I] = extract_bethe_roots(polys[s]);
    }
  }
  return recs;
}

namespace {

// |P(z)| small against the polynomial's scale around z: z sits on a root.
bool near_zero(const std::vector<cplx> &c, cplx z) {
  double mag = 0.0, zp = 1.0;
  const double r = std::max(1.0, std::abs(z));
  for (const cplx &x : c) {
    mag += std::abs(x) * zp;
    zp *= r;
  }
  return std::abs(poly_eval(c, z)) <= 1e-8 * mag;
}

}  // namespace

std::vector<RootResidual> bethe_residuals(const NestingPath &path, const SpectrumRecord &rec,
                                          const Grading &g, const Twists &tw) {
  std::vector<RootResidual> out;
  const int N = g.size();
  for (int i = 1; i < N; ++i) {
    const Subset &Im = path.chain[i - 1], &Ii = path.chain[i], &Ip = path.chain[i + 1];
    const bool same = g.parity(path.order[i - 1]) == g.parity(path.order[i]);
    const auto &pm = rec.poly.at(Im), &pi = rec.poly.at(Ii), &pp = rec.poly.at(Ip);
    auto Qm = [&](cplx z) { return q_function(g, Im, tw, pm, z); };
    auto Qi = [&](cplx z) { return q_function(g, Ii, tw, pi, z); };
    auto Qp = [&](cplx z) { return q_function(g, Ip, tw, pp, z); };
    for (const cplx &r : rec.roots.at(Ii)) {
      RootResidual rr{i, r, 0.0, false};
      cplx product, target;
      if (same) {
        rr.skipped = near_zero(pm, r - 0.5) || near_zero(pm, r + 0.5) || near_zero(pi, r + 1.0) ||
                     near_zero(pi, r - 1.0) || near_zero(pp, r - 0.5) || near_zero(pp, r + 0.5);
        product = Qm(r - 0.5) / Qm(r + 0.5) * Qi(r + 1.0) / Qi(r - 1.0) * Qp(r - 0.5) / Qp(r + 0.5);
        target = -1.0;
      } else {
        rr.skipped = near_zero(pm, r - 0.5) || near_zero(pm, r + 0.5) || near_zero(pp, r - 0.5) ||
                     near_zero(pp, r + 0.5);
        product = Qm(r + 0.5) * Qp(r - 0.5) / (Qm(r - 0.5) * Qp(r + 0.5));
        target = 1.0;
      }
      if (!rr.skipped) rr.residual = std::abs(target / product - 1.0);
      out.push_back(rr);
    }
  }
  return out;
}

double energy_from_roots(const std::vector<cplx> &roots, bool fermionic_vacuum, int L) {
  cplx s = 0.0;
  for (const cplx &z : roots) {
    if (std::abs(z - 0.5) < 1e-6 || std::abs(z + 0.5) < 1e-6)
      throw std::domain_error("energy_from_roots: root at the pole +-1/2");
    s += 1.0 / (0.25 - z * z);
  }
  const double e = 2.0 * s.real();
  return fermionic_vacuum ? 4.0 * L - e : e;
}

double path_energy(const NestingPath &path, const SpectrumRecord &rec, int L) {
  const int N = static_cast<int>(path.order.size());
  return energy_from_roots(rec.roots.at(path.chain[N - 1]), path.grading.back() == 'F', L);
}

SpectrumReport cross_check_spectrum(const Grading &g, int L, const Twists &tw,
                                    const std::vector<NestingPath> &paths, std::uint64_t seed) {
  SpectrumReport rep;
  rep.g = g;
  rep.L = L;
  rep.twists = tw;
  rep.paths = paths;
  for (const NestingPath &p : paths) rep.path_summary.push_back(PathSummary{to_string(p), p.grading, 0.0, 0});
  std::vector<SpectrumRecord> recs;
  try {
    recs = spectrum_records(common_eigenbasis(g, L, tw, seed));
  } catch (const std::exception &e) {
    rep.errors.push_back(e.what());
    return rep;
  }
  for (SpectrumRecord &rec : recs) {
    StateReport st;
    st.record = std::move(rec);
    const SpectrumRecord &r = st.record;
    double lo = 0.0, hi = 0.0;
    bool have = false;
    for (std::size_t k = 0; k < paths.size(); ++k) {
      double res = 0.0;
      try {
        for (const RootResidual &rr : bethe_residuals(paths[k], r, g, tw)) {
          if (rr.skipped) ++rep.path_summary[k].skipped;
          else res = std::max(res, rr.residual);
        }
        const double e = path_energy(paths[k], r, L);
        st.path_energies.push_back(e);
        st.energy_deviation = std::max(st.energy_deviation, std::abs(e - r.energy) / std::max(1.0, std::abs(r.energy)));
        lo = have ? std::min(lo, e) : e;
        hi = have ? std::max(hi, e) : e;
        have = true;
      } catch (const std::domain_error &) {
        // final-level roots on the poles: no energy from this path
        st.path_energies.push_back(std::nan(""));
        st.singular_paths.push_back(static_cast<int>(k));
        ++rep.path_summary[k].singular;
        ++rep.singular_pairs;
      }
      st.path_residuals.push_back(res);
      rep.path_summary[k].max_residual = std::max(rep.path_summary[k].max_residual, res);
      rep.max_bethe_residual = std::max(rep.max_bethe_residual, res);
    }
    st.path_spread = hi - lo;
    rep.max_energy_deviation = std::max(rep.max_energy_deviation, st.energy_deviation);
    rep.max_path_spread = std::max(rep.max_path_spread, st.path_spread);
    rep.states.push_back(std::move(st));
  }
  return rep;
}

std::vector<ContinuedState> continue_to_zero_twist(const Grading &g, int L, const Twists &tw,
                                                   std::uint64_t seed) {
  const std::vector<NestingPath> paths = enumerate_paths(build_hasse(g));
  std::vector<double> ts;
  std::vector<std::vector<double>> energies;  // per step, states in sector order
  std::vector<std::vector<int>> occ;
  for (int k = 0; k < 5; ++k) {
    const double t = 0.1 / (1 << k);
    const std::vector<SpectrumRecord> recs = spectrum_records(common_eigenbasis(g, L, tw.scaled(t), seed));
    std::vector<double> e;
    occ.clear();
    for (const SpectrumRecord &r : recs) {
      // first path whose final-level roots avoid the poles
      double v = std::nan("");
      for (const NestingPath &p : paths) {
        try {
          v = path_energy(p, r, L);
          break;
        } catch (const std::domain_error &) {
        }
      }
      e.push_back(v);
      occ.push_back(r.occupation);
    }
    // order by Bethe energy inside each sector
    std::vector<int> perm(e.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
      return occ[a] != occ[b] ? occ[a] < occ[b] : e[a] < e[b];
    });
    std::vector<double> sorted;
    for (int p : perm) sorted.push_back(e[p]);
    ts.push_back(t);
    energies.push_back(sorted);
  }
  // zero-twist direct energies, same ordering
  const MatrixXc H0 = build_hamiltonian(g, L, Twists::zero(g.size()));
  std::vector<ContinuedState> out;
  for (const auto &[o, idx] : occupation_sectors(g, L)) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(sector_block(H0, idx));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(ContinuedState{o, 0.0, es.eigenvalues()(k)});
  }
  for (std::size_t s = 0; s < out.size(); ++s) {
    // Neville extrapolation to t = 0
    std::vector<double> p;
    for (const auto &step : energies) p.push_back(step[s]);
    const int n = static_cast<int>(p.size());
    for (int level = 1; level < n; ++level)
      for (int i = n - 1; i >= level; --i)
        p[i] = (ts[i - level] * p[i] - ts[i] * p[i - 1]) / (ts[i - level] - ts[i]);
    out[s].energy = p[n - 1];
  }
  return out;
}

std::map<std::pair<std::vector<int>, Subset>, std::vector<int>> degree_table(
    const std::vector<SpectrumRecord> &records) {
  std::map<std::pair<std::vector<int>, Subset>, std::set<int>> acc;
  for (const SpectrumRecord &r : records)
    for (const auto &[I, c] : r.poly) acc[{r.occupation, I}].insert(static_cast<int>(c.size()) - 1);
  std::map<std::pair<std::vector<int>, Subset>, std::vector<int>> out;
  for (const auto &[k, v] : acc) out[k] = std::vector<int>(v.begin(), v.end());
  return out;
}

}  // namespace qop
