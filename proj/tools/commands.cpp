#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace qop::cli {

namespace fs = std::filesystem;

json Tolerances::to_json() const {
  json j;
  j["ybe"] = ybe;
  j["commute"] = commute;
  j["qq"] = qq;
  j["tqq"] = tqq;
  j["xqqq"] = xqqq;
  j["fact"] = fact;
  j["fact_exact"] = fact_exact;
  j["boundary"] = boundary;
  j["energy"] = energy;
  j["bethe"] = bethe;
  return j;
}

void Tolerances::set_all(double v) {
  ybe = commute = qq = tqq = xqqq = fact = fact_exact = boundary = energy = bethe = v;
}

bool Tolerances::set(const std::string &key, double v) {
  double *slot = key == "ybe"          ? &ybe
                 : key == "commute"    ? &commute
                 : key == "qq"         ? &qq
                 : key == "tqq"        ? &tqq
                 : key == "xqqq"       ? &xqqq
                 : key == "fact"       ? &fact
                 : key == "fact_exact" ? &fact_exact
                 : key == "boundary"   ? &boundary
                 : key == "energy"     ? &energy
                 : key == "bethe"      ? &bethe
                                       : nullptr;
  if (!slot) return false;
  *slot = v;
  return true;
}

Grading Config::grading() const {
  if (n < 0 || m < 0 || n + m < 1) throw config_error("n, m: need n >= 0, m >= 0, n + m >= 1");
  if (n + m > 4) throw config_error("n, m: n + m <= 4 supported");
  return Grading(n, m);
}

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string &s, const std::string &field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw config_error(field + ": cannot parse '" + s + "' as a number");
  }
}

}  // namespace

Twists Config::twist_config() const {
  const int N = n + m;
  if (twists == "generic") return Twists::generic(N);
  if (twists == "zero") return Twists::zero(N);
  Twists t;
  for (const std::string &x : split(twists, ',')) t.phi.push_back(parse_double(x, "twists"));
  if (t.size() != N) throw config_error("twists: expected " + std::to_string(N) + " angles, got " + std::to_string(t.size()));
  return t;
}

Subset Config::subset_config() const {
  const int N = n + m;
  std::string s;
  for (char c : subset)
    if (c != '{' && c != '}' && c != ' ') s += c;
  std::vector<int> members;
  if (!s.empty())
    for (const std::string &x : split(s, ',')) {
      const double v = parse_double(x, "subset");
      const int a = static_cast<int>(v);
      if (a != v || a < 1 || a > N) throw config_error("subset: label '" + x + "' outside 1.." + std::to_string(N));
      if (std::find(members.begin(), members.end(), a - 1) != members.end()) throw config_error("subset: repeated label " + x);
      members.push_back(a - 1);
    }
  return Subset(members);
}

json Config::echo() const {
  json j;
  j["n"] = n;
  j["m"] = m;
  if (L) j["L"] = *L;
  j["twists"] = twists;
  j["seed"] = seed;
  j["suite"] = suite;
  j["cutoff"] = cutoff;
  return j;
}

cplx parse_complex(const std::string &s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {parse_double(parts[0], "z"), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0], "z"), parse_double(parts[1], "z")};
  throw config_error("z: expected 're' or 're,im', got '" + s + "'");
}

void apply_config_file(Config &cfg, const std::string &path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception &e) {
    throw config_error(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string &k = it.key();
    const json &v = it.value();
    try {
      if (k == "n") cfg.n = v.get<int>();
      else if (k == "m") cfg.m = v.get<int>();
      else if (k == "L") cfg.L = v.get<int>();
      else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (k == "suite") cfg.suite = v.get<std::string>();
      else if (k == "out") cfg.out = v.get<std::string>();
      else if (k == "cutoff") cfg.cutoff = v.get<int>();
      else if (k == "tol") cfg.tol.set_all(v.get<double>());
      else if (k.rfind("tol_", 0) == 0) {
        if (!cfg.tol.set(k.substr(4), v.get<double>())) throw config_error("config: unknown key '" + k + "'");
      } else if (k == "twists") {
        if (v.is_string()) cfg.twists = v.get<std::string>();
        else {
          std::string s;
          for (const json &x : v) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x.get<double>());
            s += (s.empty() ? "" : ",") + std::string(buf);
          }
          cfg.twists = s;
        }
      } else if (k == "subset") {
        if (v.is_string()) cfg.subset = v.get<std::string>();
        else {
          std::string s;
          for (const json &x : v) s += (s.empty() ? "" : ",") + std::to_string(x.get<int>());
          cfg.subset = s;
        }
      } else if (k == "z") {
        cfg.z.clear();
        if (v.is_number()) cfg.z.push_back(v.get<double>());
        else
          for (const json &x : v) cfg.z.push_back(complex_from_json(x));
      } else {
        throw config_error("config: unknown key '" + k + "'");
      }
    } catch (const config_error &) {
      throw;
    } catch (const std::exception &e) {
      throw config_error("config: bad value for '" + k + "': " + e.what());
    }
  }
}

namespace {

struct Check {
  std::string name;
  std::string inputs;
  double residual = 0.0;
  double tol = 0.0;
  bool pass() const { return std::isfinite(residual) && residual <= tol; }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string zstr(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g%+.4gi", z.real(), z.imag());
  return buf;
}

std::vector<cplx> sample_z(const Config &cfg, std::mt19937_64 &rng, int count) {
  if (!cfg.z.empty()) return cfg.z;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> out;
  for (int k = 0; k < count; ++k) {
    const double re = U(rng), im = U(rng);
    out.emplace_back(re, im);
  }
  return out;
}

fs::path out_dir(const Config &cfg) {
  fs::path p(cfg.out);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path &p, const std::string &text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw config_error("out: cannot write '" + p.string() + "'");
  os << text;
}

json checks_json(std::vector<Check> checks) {
  std::stable_sort(checks.begin(), checks.end(), [](const Check &a, const Check &b) { return a.name < b.name; });
  json arr = json::array();
  for (const Check &c : checks) {
    json j;
    j["name"] = c.name;
    j["inputs"] = c.inputs;
    j["residual"] = c.residual;
    j["tolerance"] = c.tol;
    j["pass"] = c.pass();
    arr.push_back(std::move(j));
  }
  return arr;
}

bool all_pass(const std::vector<Check> &checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass(); });
}

void print_checks(const std::vector<Check> &checks) {
  for (const Check &c : checks)
    std::printf("%-4s %-44s residual %-10s tol %-8s %s\n", c.pass() ? "ok" : "FAIL", c.name.c_str(),
                fmt(c.residual).c_str(), fmt(c.tol).c_str(), c.inputs.c_str());
}

// ---- verification suites ----

void suite_ybe(const Config &cfg, const Grading &g, std::mt19937_64 &rng, std::vector<Check> &out) {
  const int N = g.size();
  std::vector<std::pair<cplx, cplx>> pairs;
  const auto zs = sample_z(cfg, rng, 10);
  for (std::size_t k = 0; k + 1 < zs.size(); k += 2) pairs.emplace_back(zs[k], zs[k + 1]);
  if (pairs.empty()) pairs.emplace_back(zs[0], zs[0] + 0.37);
  for (unsigned mask = 0; mask < (1u << N); ++mask) {
    const Subset I = Subset::from_mask(mask, N);
    double r = 0.0;
    for (const auto &[z1, z2] : pairs) r = std::max(r, check_ybe(g, I, ModuleSpec::singlet(), z1, z2));
    out.push_back({"ybe I=" + to_string(I), std::to_string(pairs.size()) + " (z1,z2) pairs, singlet", r, cfg.tol.ybe});
  }
  double r = 0.0;
  for (const auto &[z1, z2] : pairs)
    r = std::max(r, check_ybe(g, Subset::full(N), ModuleSpec::fundamental(), z1, z2));
  out.push_back({"ybe full set, fundamental", std::to_string(pairs.size()) + " (z1,z2) pairs", r, cfg.tol.ybe});
}

void suite_commute(const Config &cfg, const Grading &g, int L, const Twists &tw, std::mt19937_64 &rng,
                   std::vector<Check> &out) {
  const int N = g.size();
  const auto zs = sample_z(cfg, rng, 6);
  std::vector<std::pair<cplx, cplx>> pairs;
  for (std::size_t k = 0; k + 1 < zs.size(); k += 2) pairs.emplace_back(zs[k], zs[k + 1]);
  if (pairs.empty()) pairs.emplace_back(zs[0], zs[0] + 0.37);
  const MatrixXc H = build_hamiltonian(g, L, tw);
  std::vector<Subset> subsets;
  for (unsigned mask = 0; mask < (1u << N); ++mask) subsets.push_back(Subset::from_mask(mask, N));
  std::vector<std::vector<MatrixXc>> Qz(subsets.size()), Qw(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s)
    for (const auto &[z, w] : pairs) {
      Qz[s].push_back(q_operator(g, subsets[s], L, tw, z).matrix);
      Qw[s].push_back(q_operator(g, subsets[s], L, tw, w).matrix);
    }
  const std::string inputs = "L=" + std::to_string(L) + ", " + std::to_string(pairs.size()) + " (z,z') pairs";
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    double rh = 0.0, sector = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      rh = std::max(rh, max_abs(Qz[a][k] * H - H * Qz[a][k]));
      sector = std::max(sector, off_sector_residual(g, L, Qz[a][k]));
    }
    out.push_back({"commute [Q" + to_string(subsets[a]) + ",H]", inputs, rh, cfg.tol.commute});
    out.push_back({"sectors Q" + to_string(subsets[a]), inputs, sector, cfg.tol.boundary});
    for (std::size_t b = 0; b < subsets.size(); ++b) {
      double r = 0.0;
      for (std::size_t k = 0; k < pairs.size(); ++k) r = std::max(r, max_abs(Qz[a][k] * Qw[b][k] - Qw[b][k] * Qz[a][k]));
      out.push_back({"commute [Q" + to_string(subsets[a]) + ",Q" + to_string(subsets[b]) + "]", inputs, r, cfg.tol.commute});
    }
  }
}

void suite_qq(const Config &cfg, const Grading &g, int L, const Twists &tw, std::mt19937_64 &rng,
              std::vector<Check> &out) {
  const auto zs = sample_z(cfg, rng, 5);
  const HasseDiagram d = build_hasse(g);
  for (const Plaquette &pl : d.plaquettes) {
    const std::string kind = plaquette_kind(g, pl) == PlaquetteKind::same_parity ? "same parity" : "mixed parity";
    for (const auto &[A, B] : {std::pair{pl.a, pl.b}, std::pair{pl.b, pl.a}}) {
      const double r = verify_qq(g, L, tw, pl.I, A, B, zs);
      out.push_back({"qq I=" + to_string(pl.I) + " A=" + std::to_string(A + 1) + " B=" + std::to_string(B + 1),
                     kind + ", L=" + std::to_string(L) + ", " + std::to_string(zs.size()) + " z", r, cfg.tol.qq});
    }
  }
}

void suite_tqq(const Config &cfg, const Grading &g, int L, const Twists &tw, std::mt19937_64 &rng,
               std::vector<Check> &out) {
  if (g.n != 1 || g.m != 1) return;
  const auto zs = sample_z(cfg, rng, 8);
  std::vector<std::pair<cplx, cplx>> pairs;
  for (std::size_t k = 0; k + 1 < zs.size(); k += 2) pairs.emplace_back(zs[k], zs[k + 1]);
  if (pairs.empty()) pairs.emplace_back(zs[0], zs[0] + 0.37);
  const TqqResult r = verify_tqq_gl11(L, tw, pairs);
  const std::string inputs = "L=" + std::to_string(L) + ", " + std::to_string(pairs.size()) + " (z1,z2) pairs";
  out.push_back({"tqq T+ = sine Q1 Q2", inputs, r.tqq, cfg.tol.tqq});
  out.push_back({"tqq T+_0 split", inputs, r.split, cfg.tol.tqq});
  // T_singlet(z) e^{-i(Phi1-Phi2)z} interpolates to z^L
  std::vector<std::pair<cplx, MatrixXc>> samples;
  for (cplx z : interpolation_nodes(L))
    samples.emplace_back(z, t_operator(g, ModuleSpec::singlet(), L, tw, z).matrix *
                                std::exp(cplx(0.0, -(tw[0] - tw[1])) * z));
  const MatrixPolynomial P = interpolate_polynomial(samples);
  const int dim = ipow(2, L);
  double dev = P.degree() == L ? 0.0 : 1.0;
  for (int k = 0; k <= P.degree(); ++k) {
    const MatrixXc expect = (k == L ? 1.0 : 0.0) * MatrixXc::Identity(dim, dim);
    dev = std::max(dev, max_abs(P.coeffs[k] - expect));
  }
  out.push_back({"tqq T_singlet closed form", "L=" + std::to_string(L) + ", interpolated", dev, cfg.tol.tqq});
}

void suite_xqqq(const Config &cfg, const Grading &g, int L, const Twists &tw, std::mt19937_64 &rng,
                std::vector<Check> &out) {
  const int N = g.size();
  const auto zs = sample_z(cfg, rng, 1);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  for (unsigned mask = 1; mask < (1u << N); ++mask) {
    const Subset I = Subset::from_mask(mask, N);
    if (I.size() > 2) continue;
    std::vector<cplx> Lambda;
    for (int k = 0; k < I.size(); ++k) Lambda.push_back(U(rng));
    std::string lam;
    for (const cplx &x : Lambda) lam += (lam.empty() ? "" : ",") + fmt(x.real());
    double r = 0.0;
    for (cplx z : zs) r = std::max(r, verify_xqqq(g, I, Lambda, L, tw, z));
    out.push_back({"xqqq I=" + to_string(I), "L=" + std::to_string(L) + ", Lambda=(" + lam + ")", r, cfg.tol.xqqq});
  }
  if (g.n == 2 && g.m == 0)
    for (int two_j : {1, 2}) {
      double r = 0.0;
      for (cplx z : zs) r = std::max(r, verify_split_gl2(two_j, L, tw, z));
      out.push_back({"xqqq gl(2) split 2j=" + std::to_string(two_j), "L=" + std::to_string(L), r, cfg.tol.xqqq});
    }
}

void suite_fact(const Config &cfg, const Grading &g, std::mt19937_64 &rng, std::vector<Check> &out) {
  const int N = g.size();
  const auto zs = sample_z(cfg, rng, 1);
  for (unsigned mi = 1; mi < (1u << N); ++mi)
    for (unsigned mj = 1; mj < (1u << N); ++mj) {
      if (mi & mj) continue;
      const Subset I = Subset::from_mask(mi, N), J = Subset::from_mask(mj, N);
      for (double lambda : {0.0, 0.7}) {
        const FactorizationResult r = verify_factorization(g, I, J, zs[0], lambda, cfg.cutoff);
        const std::string inputs =
            r.exact ? "exact, all-fermionic"
                    : "cutoff " + std::to_string(cfg.cutoff) + ", window " + std::to_string(r.window_states) + "/" +
                          std::to_string(r.total_states) + " states";
        out.push_back({"fact I=" + to_string(I) + " J=" + to_string(J) + " lambda=" + fmt(lambda), inputs, r.residual,
                       r.exact ? cfg.tol.fact_exact : cfg.tol.fact});
      }
    }
}

void suite_boundary(const Config &cfg, const Grading &g, int L, const Twists &tw, std::mt19937_64 &rng,
                    std::vector<Check> &out) {
  const int N = g.size();
  const auto zs = sample_z(cfg, rng, 3);
  const int dim = ipow(N, L);
  double e0 = 0.0, ef = 0.0;
  for (cplx z : zs) {
    e0 = std::max(e0, max_abs(q_operator(g, Subset(), L, tw, z).matrix - MatrixXc::Identity(dim, dim)));
    const Subset full = Subset::full(N);
    const MatrixXc expect = twist_prefactor(g, full, tw, z) * std::pow(z, L) * MatrixXc::Identity(dim, dim);
    ef = std::max(ef, max_abs(q_operator(g, full, L, tw, z).matrix - expect));
  }
  out.push_back({"boundary Q{} = 1", std::to_string(zs.size()) + " z", e0, cfg.tol.boundary});
  out.push_back({"boundary Q_full = prefactor z^L", std::to_string(zs.size()) + " z", ef, cfg.tol.boundary});
  const MatrixXc H = build_hamiltonian(g, L, tw);
  double vb = 0.0, vf = 0.0;
  for (int a = 0; a < N; ++a) {
    const int idx = basis_index(std::vector<int>(L, a), N);
    const VectorXc col = H.col(idx);
    VectorXc expect = VectorXc::Zero(dim);
    if (g.parity(a)) expect(idx) = 4.0 * L;
    (g.parity(a) ? vf : vb) = std::max(g.parity(a) ? vf : vb, (col - expect).cwiseAbs().maxCoeff());
  }
  out.push_back({"vacuum H|B> = 0", "L=" + std::to_string(L), vb, cfg.tol.boundary});
  if (g.m > 0) out.push_back({"vacuum H|F> = 4L|F>", "L=" + std::to_string(L), vf, cfg.tol.boundary});
  out.push_back({"hamiltonian forms agree", "L=" + std::to_string(L),
                 max_abs(hamiltonian_direct(g, L, tw) - hamiltonian_permutation(g, L, tw)), cfg.tol.boundary});
}

json report_json(const Config &cfg, const std::string &command, const std::vector<Check> &checks) {
  json j;
  j["command"] = command;
  j["config"] = cfg.echo();
  j["tolerances"] = cfg.tol.to_json();
  j["checks"] = checks_json(checks);
  j["all_pass"] = all_pass(checks);
  return j;
}

std::string join_ints(const std::vector<int> &v, const char *sep = " ") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
  return s;
}

}  // namespace

int cmd_verify(const Config &cfg) {
  const Grading g = cfg.grading();
  const int L = cfg.length(2);
  if (L < 2) throw config_error("L: need L >= 2");
  const Twists tw = cfg.twist_config();
  tw.require_distinct();
  static const std::vector<std::string> known{"all", "ybe", "commute", "qq", "tqq", "xqqq", "fact", "boundary"};
  std::vector<std::string> suites;
  for (const std::string &s : split(cfg.suite, ',')) {
    if (std::find(known.begin(), known.end(), s) == known.end()) throw config_error("suite: unknown suite '" + s + "'");
    if (s == "all") suites.insert(suites.end(), known.begin() + 1, known.end());
    else suites.push_back(s);
  }
  std::vector<Check> checks;
  for (const std::string &s : suites) {
    // each suite draws from its own stream so selections do not shift each other's samples
    const auto pos = std::find(known.begin(), known.end(), s) - known.begin();
    std::mt19937_64 rng(cfg.seed + 7919u * static_cast<std::uint64_t>(pos));
    if (s == "ybe") suite_ybe(cfg, g, rng, checks);
    else if (s == "commute") suite_commute(cfg, g, L, tw, rng, checks);
    else if (s == "qq") suite_qq(cfg, g, L, tw, rng, checks);
    else if (s == "tqq") suite_tqq(cfg, g, L, tw, rng, checks);
    else if (s == "xqqq") suite_xqqq(cfg, g, L, tw, rng, checks);
    else if (s == "fact") suite_fact(cfg, g, rng, checks);
    else if (s == "boundary") suite_boundary(cfg, g, L, tw, rng, checks);
  }
  print_checks(checks);
  write_file(out_dir(cfg) / "report.json", dump_json(report_json(cfg, "verify", checks)));
  const bool ok = all_pass(checks);
  std::printf("%zu checks, %s\n", checks.size(), ok ? "all pass" : "FAILURES");
  return ok ? 0 : 1;
}

int cmd_spectrum(const Config &cfg) {
  const Grading g = cfg.grading();
  const int L = cfg.length(2);
  if (L < 2) throw config_error("L: need L >= 2");
  const fs::path dir = out_dir(cfg);
  if (cfg.zero_twist()) {
    const std::vector<ContinuedState> cs = continue_to_zero_twist(g, L, Twists::generic(g.size()), cfg.seed);
    json states = json::array();
    std::string csv = "occupation,energy_continued,energy_direct,deviation\n";
    double worst = 0.0;
    std::printf("%-12s %22s %22s %10s\n", "occupation", "continued", "direct", "deviation");
    for (const ContinuedState &s : cs) {
      const double dev = std::abs(s.energy - s.energy_direct) / std::max(1.0, std::abs(s.energy_direct));
      worst = std::isfinite(dev) ? std::max(worst, dev) : std::numeric_limits<double>::infinity();
      json j;
      j["occupation"] = s.occupation;
      j["energy"] = s.energy;
      j["energy_direct"] = s.energy_direct;
      j["deviation"] = dev;
      states.push_back(std::move(j));
      char line[160];
      std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g\n", join_ints(s.occupation).c_str(), s.energy,
                    s.energy_direct, dev);
      csv += line;
      std::printf("%-12s %22.12f %22.12f %10.3g\n", join_ints(s.occupation).c_str(), s.energy, s.energy_direct, dev);
    }
    json j;
    j["meta"] = {{"n", g.n}, {"m", g.m}, {"L", L}, {"twists", "zero"}, {"seed", cfg.seed}};
    j["summary"] = {{"states", cs.size()}, {"max_energy_deviation", worst}, {"tolerance", cfg.tol.energy}};
    j["states"] = std::move(states);
    write_file(dir / "spectrum.json", dump_json(j));
    write_file(dir / "spectrum.csv", csv);
    const bool ok = worst <= cfg.tol.energy;
    std::printf("%zu states continued to zero twist, max deviation %s, %s\n", cs.size(), fmt(worst).c_str(),
                ok ? "pass" : "FAIL");
    return ok ? 0 : 1;
  }
  const Twists tw = cfg.twist_config();
  tw.require_distinct();
  const auto paths = enumerate_paths(build_hasse(g));
  const SpectrumReport rep = cross_check_spectrum(g, L, tw, paths, cfg.seed);
  write_file(dir / "spectrum.json", dump_json(spectrum_json(rep)));
  write_file(dir / "spectrum.csv", spectrum_csv(rep));
  std::printf("%-12s %5s %20s %-24s %12s\n", "occupation", "state", "energy", "roots per level (path 1)",
              "max residual");
  for (const StateReport &st : rep.states) {
    std::vector<int> counts;
    for (const Subset &I : paths.front().chain) counts.push_back(static_cast<int>(st.record.roots.at(I).size()));
    double res = 0.0;
    for (double r : st.path_residuals) res = std::max(res, r);
    std::printf("%-12s %5d %20.12f %-24s %12.3g%s\n", join_ints(st.record.occupation).c_str(), st.record.state,
                st.record.energy, join_ints(counts).c_str(), res,
                st.singular_paths.empty() ? "" : "  singular on some paths");
  }
  for (const std::string &e : rep.errors) std::printf("error: %s\n", e.c_str());
  for (const PathSummary &p : rep.path_summary)
    std::printf("path %-36s %s  max residual %-9s skipped roots %d  singular states %d\n", p.path.c_str(),
                p.grading.c_str(), fmt(p.max_residual).c_str(), p.skipped, p.singular);
  const bool ok = rep.errors.empty() && rep.singular_pairs == 0 && rep.max_energy_deviation <= cfg.tol.energy &&
                  rep.max_path_spread <= cfg.tol.energy && rep.max_bethe_residual <= cfg.tol.bethe;
  std::printf("%zu states: energy deviation %s, path spread %s, Bethe residual %s, singular pairs %d, %s\n",
              rep.states.size(), fmt(rep.max_energy_deviation).c_str(), fmt(rep.max_path_spread).c_str(),
              fmt(rep.max_bethe_residual).c_str(), rep.singular_pairs, ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

int cmd_tj_demo(const Config &cfg) {
  const Grading g(2, 1);
  const int L = cfg.length(3);
  if (L != 2 && L != 3) throw config_error("L: the t-J demo runs at L = 2 or 3");
  Config c3 = cfg;
  c3.n = 2;
  c3.m = 1;
  const Twists tw = c3.twist_config();
  tw.require_distinct();
  std::vector<Check> checks;
  const HasseDiagram d = build_hasse(g);
  int solid = 0, dashed = 0;
  for (const HasseEdge &e : d.edges) (e.parity ? dashed : solid)++;
  const auto paths = enumerate_paths(d);
  const auto classes = grading_classes(paths);
  std::printf("gl(2|1) t-J chain, L=%d\n", L);
  std::printf("Q-operators (nodes): %zu\nedges: %zu (%d solid bosonic, %d dashed fermionic)\nplaquettes: %zu\n",
              d.nodes.size(), d.edges.size(), solid, dashed, d.plaquettes.size());
  std::printf("paths: %zu\ngrading classes: %zu\n", paths.size(), classes.size());
  for (const auto &[grading, ps] : classes)
    for (const NestingPath &p : ps) std::printf("  %s  %s\n", grading.c_str(), to_string(p).c_str());
  auto count_check = [&](const std::string &name, std::size_t got, std::size_t want) {
    checks.push_back({name, "expected " + std::to_string(want) + ", got " + std::to_string(got),
                      got == want ? 0.0 : 1.0, 0.0});
  };
  count_check("census nodes", d.nodes.size(), 8);
  count_check("census paths", paths.size(), 6);
  count_check("census grading classes", classes.size(), 3);
  count_check("census solid edges", static_cast<std::size_t>(solid), 8);
  count_check("census dashed edges", static_cast<std::size_t>(dashed), 4);

  // all eight Q-operators: polynomial after the prefactor, degree <= L
  const cplx z0(0.31, 0.17);
  for (const Subset &I : d.nodes) {
    const MatrixPolynomial P =
        operator_polynomial([&](cplx z) { return q_operator(g, I, L, tw, z); }, L, cfg.tol.commute);
    const MatrixXc Q = q_operator(g, I, L, tw, z0).matrix;
    const int deg = effective_degree(P);
    std::printf("  Q%-8s degree %d  |Q(%s)|_max %.6g\n", to_string(I).c_str(), deg, zstr(z0).c_str(), max_abs(Q));
    count_check("Q" + to_string(I) + " degree <= L", deg <= L ? 1 : 0, 1);
  }

  // one reference Bethe system per grading class; partner paths follow the same equations
  const std::vector<std::vector<int>> systems{{0, 1, 2}, {0, 2, 1}, {2, 0, 1}};
  const EigenBasis basis = common_eigenbasis(g, L, tw, cfg.seed);
  const std::vector<SpectrumRecord> recs = spectrum_records(basis);
  json sys_json = json::array();
  for (const NestingPath &p : paths) {
    const bool reference = std::find(systems.begin(), systems.end(), p.order) != systems.end();
    double worst = 0.0;
    int skipped = 0, roots = 0;
    for (const SpectrumRecord &r : recs)
      for (const RootResidual &rr : bethe_residuals(p, r, g, tw)) {
        ++roots;
        if (rr.skipped) ++skipped;
        else worst = std::max(worst, rr.residual);
      }
    const std::string name = std::string(reference ? "bethe system " : "bethe partner ") + p.grading + " " + to_string(p);
    // a skipped equation (0/0 at a root collision) is not a satisfied one
    checks.push_back({name, std::to_string(recs.size()) + " states, " + std::to_string(roots) + " roots, " +
                                std::to_string(skipped) + " skipped",
                      skipped ? std::numeric_limits<double>::infinity() : worst, cfg.tol.bethe});
    json s;
    s["path"] = to_string(p);
    s["grading"] = p.grading;
    s["reference"] = reference;
    s["roots"] = roots;
    s["skipped"] = skipped;
    s["max_residual"] = worst;
    sys_json.push_back(std::move(s));
  }
  print_checks(checks);
  const fs::path dir = out_dir(cfg);
  write_file(dir / "hasse.dot", hasse_dot(d));
  json rep = report_json(cfg, "tj-demo", checks);
  rep["L"] = L;
  rep["twists"] = tw.phi;
  rep["bethe_systems"] = std::move(sys_json);
  write_file(dir / "report.json", dump_json(rep));
  const bool ok = all_pass(checks);
  std::printf("wrote %s and %s\n%s\n", (dir / "hasse.dot").string().c_str(), (dir / "report.json").string().c_str(),
              ok ? "all pass" : "FAILURES");
  return ok ? 0 : 1;
}

int cmd_export_operator(const Config &cfg) {
  const Grading g = cfg.grading();
  const int L = cfg.length(2);
  if (L < 1) throw config_error("L: need L >= 1");
  const Twists tw = cfg.twist_config();
  const Subset I = cfg.subset_config();
  const cplx z = cfg.z.empty() ? cplx(0.3, 0.2) : cfg.z.front();
  const TransferOperator T = q_operator(g, I, L, tw, z);
  const std::string text = dump_json(operator_json(T));
  fs::path file(cfg.out);
  if (file.extension() != ".json") file = out_dir(cfg) / "operator.json";
  else if (file.has_parent_path()) fs::create_directories(file.parent_path());
  write_file(file, text);
  std::ifstream in(file, std::ios::binary);
  const ImportedOperator back = operator_from_json(json::parse(in));
  bool equal = back.matrix.rows() == T.matrix.rows();
  for (Eigen::Index i = 0; equal && i < T.matrix.rows(); ++i)
    for (Eigen::Index j = 0; equal && j < T.matrix.cols(); ++j)
      equal = back.matrix(i, j) == T.matrix(i, j);
  const double off = off_sector_residual(g, L, T.matrix);
  std::printf("Q%s at z=%s, L=%d: wrote %s\nround trip bitwise equal: %s\noff-block max entry: %.3g\n",
              to_string(I).c_str(), zstr(z).c_str(), L, file.string().c_str(), equal ? "yes" : "no", off);
  // blocks drop entries between sectors; they must vanish for the export to be faithful
  return equal && off <= cfg.tol.boundary ? 0 : 1;
}

int cmd_hasse(const Config &cfg) {
  const Grading g = cfg.grading();
  const HasseDiagram d = build_hasse(g);
  const auto paths = enumerate_paths(d);
  int solid = 0, dashed = 0;
  for (const HasseEdge &e : d.edges) (e.parity ? dashed : solid)++;
  std::printf("gl(%d|%d): %zu nodes, %zu edges (%d solid, %d dashed), %zu plaquettes, %zu paths, %zu grading classes\n",
              g.n, g.m, d.nodes.size(), d.edges.size(), solid, dashed, d.plaquettes.size(), paths.size(),
              grading_classes(paths).size());
  for (const Plaquette &pl : d.plaquettes)
    std::printf("  plaquette I=%s A=%d B=%d %s\n", to_string(pl.I).c_str(), pl.a + 1, pl.b + 1,
                plaquette_kind(g, pl) == PlaquetteKind::same_parity ? "same parity" : "mixed parity");
  for (const NestingPath &p : paths) std::printf("  path %s  %s\n", p.grading.c_str(), to_string(p).c_str());
  std::printf("%s", hasse_dot(d).c_str());
  return 0;
}

}  // namespace qop::cli
