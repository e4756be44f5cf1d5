#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace qop;

TEST_CASE("joint eigenbasis of gl(1|1), L=2") {
  Grading g(1, 1);
  const Twists tw = Twists::generic(2);
  const EigenBasis basis = common_eigenbasis(g, 2, tw);
  CHECK(basis.size() == 4);
  CHECK(basis.sectors.size() == 3);
  double off = 0.0;
  const VectorXc E = diagonal_values(basis, basis.H, &off);
  CHECK(off < 1e-10);
  for (const EigenSector &s : basis.sectors) {
    const Eigen::Index k = s.V.cols();
    CHECK(max_abs(s.V * s.Vinv - MatrixXc::Identity(k, k)) < 1e-12);
  }
  std::vector<double> got, want;
  for (Eigen::Index i = 0; i < E.size(); ++i) got.push_back(E(i).real());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(build_hamiltonian(g, 2, tw));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) want.push_back(es.eigenvalues()(i));
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("zero twists cannot split degeneracies") {
  CHECK_THROWS_AS(common_eigenbasis(Grading(2, 0), 2, Twists::zero(2)), degeneracy_error);
}

TEST_CASE("polynomial roots") {
  const std::vector<cplx> roots{{1.0, 0.0}, {0.0, 2.0}, {-0.5, 0.25}};
  std::vector<cplx> poly{1.0};
  for (cplx r : roots) {
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= r * poly[k];
    }
    poly = next;
  }
  for (cplx r : roots) CHECK(std::abs(poly_eval(poly, r)) < 1e-14);
  std::vector<cplx> found = extract_bethe_roots(poly);
  REQUIRE(found.size() == 3);
  for (cplx r : roots) {
    double best = 1e9;
    for (cplx f : found) best = std::min(best, std::abs(f - r));
    CHECK(best < 1e-12);
  }
  CHECK(extract_bethe_roots({3.0}).empty());
}

TEST_CASE("energy from roots") {
  CHECK(energy_from_roots({}, false, 3) == 0.0);
  CHECK(energy_from_roots({}, true, 3) == 12.0);
  CHECK(energy_from_roots({0.0}, false, 2) == doctest::Approx(8.0));
  CHECK(energy_from_roots({0.0}, true, 2) == doctest::Approx(0.0));
  // a conjugate pair gives a real energy
  const double e = energy_from_roots({{0.1, 0.7}, {0.1, -0.7}}, false, 4);
  const cplx direct = 2.0 / (0.25 - cplx(0.1, 0.7) * cplx(0.1, 0.7)) + 2.0 / (0.25 - cplx(0.1, -0.7) * cplx(0.1, -0.7));
  CHECK(e == doctest::Approx(direct.real()));
}

TEST_CASE("boundary eigenvalue polynomials") {
  Grading g(2, 1);
  const int L = 2;
  const EigenBasis basis = common_eigenbasis(g, L, Twists::generic(3));
  for (const auto &p : q_eigen_polynomials(basis, Subset())) CHECK(p.size() == 1);
  for (const auto &p : q_eigen_polynomials(basis, Subset::full(3))) {
    REQUIRE(p.size() == static_cast<std::size_t>(L + 1));
    CHECK(std::abs(p[L] - 1.0) < 1e-12);
  }
}

TEST_CASE("spectrum cross-check for gl(1|1)") {
  Grading g(1, 1);
  const Twists tw = Twists::generic(2);
  const auto paths = enumerate_paths(build_hasse(g));
  for (int L : {2, 3, 4}) {
    const SpectrumReport rep = cross_check_spectrum(g, L, tw, paths);
    CHECK(rep.states.size() == static_cast<std::size_t>(ipow(2, L)));
    CHECK(rep.errors.empty());
    CHECK(rep.singular_pairs == 0);
    CHECK(rep.max_energy_deviation < 1e-7);
    CHECK(rep.max_path_spread < 1e-7);
    CHECK(rep.max_bethe_residual < 1e-7);
  }
}

TEST_CASE("Bethe residuals on every path for gl(2|1), L=2") {
  Grading g(2, 1);
  const Twists tw = Twists::generic(3);
  const EigenBasis basis = common_eigenbasis(g, 2, tw);
  const auto records = spectrum_records(basis);
  CHECK(records.size() == 9);
  for (const NestingPath &p : enumerate_paths(build_hasse(g)))
    for (const SpectrumRecord &rec : records)
      for (const RootResidual &r : bethe_residuals(p, rec, g, tw))
        if (!r.skipped) CHECK(r.residual < 1e-7);
}

TEST_CASE("states with final-level roots on the energy poles are flagged") {
  Grading g(2, 1);
  const Twists tw = Twists::generic(3);
  const SpectrumReport rep = cross_check_spectrum(g, 2, tw, enumerate_paths(build_hasse(g)));
  CHECK(rep.singular_pairs > 0);
  for (const StateReport &st : rep.states) {
    if (st.singular_paths.empty()) {
      CHECK(st.energy_deviation < 1e-7);
      continue;
    }
    // Q_{1,3} = z^2 - 1/4 on this state
    const auto &roots = st.record.roots.at(Subset({0, 2}));
    REQUIRE(roots.size() == 2);
    for (cplx r : roots) CHECK(std::abs(std::abs(r.real()) - 0.5) + std::abs(r.imag()) < 1e-9);
  }
}

TEST_CASE("zero-twist continuation for gl(2|0), L=2") {
  const auto states = continue_to_zero_twist(Grading(2, 0), 2, Twists::generic(2));
  std::vector<double> e;
  for (const ContinuedState &s : states) {
    CHECK(std::abs(s.energy - s.energy_direct) < 1e-7);
    e.push_back(s.energy_direct);
  }
  std::sort(e.begin(), e.end());
  REQUIRE(e.size() == 4);
  CHECK(e[0] == doctest::Approx(0.0));
  CHECK(e[2] == doctest::Approx(0.0));
  CHECK(e[3] == doctest::Approx(8.0));
}

TEST_CASE("degree table") {
  Grading g(1, 1);
  const auto table = degree_table(spectrum_records(common_eigenbasis(g, 3, Twists::generic(2))));
  for (const auto &[key, degrees] : table) {
    const auto &[occ, I] = key;
    for (int d : degrees) {
      if (I.size() == 0) CHECK(d == 0);
      if (I.size() == 2) CHECK(d == 3);
      if (I == Subset({0})) CHECK(d == occ[0]);
    }
  }
}

TEST_CASE("coincident twists in an oscillator weight name the pair") {
  try {
    q_operator(Grading(2, 1), Subset({0}), 2, Twists{{0.4, 0.4, 1.3}}, 0.2);
    FAIL("expected singular_twist");
  } catch (const singular_twist &e) {
    CHECK(e.a == 0);
    CHECK(e.b == 1);
    CHECK(std::string(e.what()).find("(1,2)") != std::string::npos);
  }
}
