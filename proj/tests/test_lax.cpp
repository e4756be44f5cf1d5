#include "oracles.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace qop;

namespace {

const std::vector<std::pair<int, int>> kSignatures{{1, 1}, {2, 0}, {2, 1}, {1, 2}};

}  // namespace

TEST_CASE("Yang-Baxter for every subset with the singlet module") {
  std::mt19937_64 rng(5);
  for (auto [n, m] : kSignatures) {
    Grading g(n, m);
    for (unsigned mask = 0; mask < (1u << g.size()); ++mask) {
      const Subset I = Subset::from_mask(mask, g.size());
      for (int rep = 0; rep < 2; ++rep) {
        const cplx z1 = oracle::random_complex(rng, 2.0), z2 = oracle::random_complex(rng, 2.0);
        CHECK_MESSAGE(check_ybe(g, I, ModuleSpec::singlet(), z1, z2) < 1e-11, to_string(I));
      }
    }
  }
}

TEST_CASE("Yang-Baxter for fundamental and Verma modules") {
  for (auto [n, m] : kSignatures) {
    Grading g(n, m);
    CHECK(check_ybe(g, Subset::full(g.size()), ModuleSpec::fundamental(), {0.3, 0.1}, {-0.4, 0.9}) < 1e-11);
  }
  Grading g(2, 1);
  CHECK(check_ybe(g, Subset({0}), ModuleSpec::verma({0.7}), {0.3, 0.1}, {-0.4, 0.9}) < 1e-11);
  CHECK(check_ybe(g, Subset({0, 1}), ModuleSpec::verma({0.7, -0.2}), {0.3, 0.1}, {-0.4, 0.9}) < 1e-10);
  CHECK(check_ybe(g, Subset({0, 2}), ModuleSpec::verma({0.7, -0.2}), {0.3, 0.1}, {-0.4, 0.9}) < 1e-10);
}

TEST_CASE("perturbed Lax operator violates Yang-Baxter") {
  Grading g(2, 1);
  const Subset I({0, 2});
  LaxOperator L1 = lax_canonical(g, I, ModuleSpec::singlet(), {0.3, 0.1});
  LaxOperator L2 = lax_canonical(g, I, ModuleSpec::singlet(), {-0.4, 0.9});
  for (LaxOperator *L : {&L1, &L2}) {
    L->entries[0] = osc_add(L->entries[0], osc_mul(L->fams, osc_create(L->fams, 0), osc_annihilate(L->fams, 0)), 0.05);
    rebuild_local(*L);
  }
  CHECK(ybe_residual(L1, L2) >= 1e-4);
}

TEST_CASE("lax sign and entry parity") {
  Grading g(2, 1);
  CHECK(lax_sign(g, 0, 0) == 1);
  CHECK(lax_sign(g, 0, 2) == -1);
  CHECK(lax_sign(g, 2, 0) == 1);
  CHECK(lax_sign(g, 2, 2) == 1);
  for (unsigned mask = 0; mask < 8; ++mask) {
    const LaxOperator L = lax_canonical(g, Subset::from_mask(mask, 3), ModuleSpec::singlet(), 0.4);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (!L.entry(a, b).empty()) CHECK(osc_parity(L.fams, L.entry(a, b)) == (g.parity(a) ^ g.parity(b)));
  }
}

TEST_CASE("oscillator families") {
  Grading g(2, 1);
  const FamilySet fs = lax_families(g, Subset({0, 2}));
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].row == 0);
  CHECK(fs[0].col == 1);
  CHECK(!fs.fermionic(0));
  CHECK(fs[1].row == 2);
  CHECK(fs[1].col == 1);
  CHECK(fs.fermionic(1));
  CHECK(lax_families(g, Subset()).size() == 0);
  CHECK(lax_families(g, Subset::full(3)).size() == 0);
  CHECK(lax_families(Grading(1, 2), Subset({0})).size() == 2);
}

TEST_CASE("boundary Lax operators") {
  Grading g(1, 1);
  const LaxOperator L0 = lax_canonical(g, Subset(), ModuleSpec::singlet(), 0.7);
  CHECK(L0.entry(0, 0) == osc_scalar(L0.fams, 1.0));
  CHECK(L0.entry(0, 1).empty());
  const LaxOperator Lf = lax_canonical(g, Subset::full(2), ModuleSpec::singlet(), 0.7);
  CHECK(Lf.entry(1, 1) == osc_scalar(Lf.fams, 0.7));
}

TEST_CASE("fundamental generators satisfy the superalgebra relations") {
  for (auto [n, m] : kSignatures) {
    Grading g(n, m);
    CHECK(generator_relation_residual(g, Subset::full(g.size()), fundamental_generators(g), g.parities()) == 0.0);
  }
}

TEST_CASE("invalid module requests") {
  Grading g(2, 1);
  GeneratorTable bad = fundamental_generators(g);
  bad[{0, 1}] *= 2.0;
  CHECK_THROWS_AS(lax_full(g, ModuleSpec::explicit_table(bad, g.parities()), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lax_canonical(g, Subset({0}), ModuleSpec::fundamental(), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lax_canonical(g, Subset({0, 1, 2}), ModuleSpec::verma({1, 2, 3}), 0.1), std::domain_error);
  CHECK_THROWS_AS(lax_canonical(g, Subset({0, 1}), ModuleSpec::verma({1}), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lax_canonical(g, Subset({5}), ModuleSpec::singlet(), 0.1), std::invalid_argument);
}

TEST_CASE("fused product on explicit Jordan-Wigner matrices") {
  Grading g(1, 1);
  for (auto [I, J] : {std::pair{Subset({0}), Subset({1})}, {Subset({1}), Subset({0})}}) {
    for (cplx lambda : {cplx(0.0), cplx(0.7, -0.3)}) {
      const FusionData fd = fusion_data(g, I, J, {0.4, 0.2}, lambda);
      const MatrixXc X = oracle::fermion_fock_matrix(fd.fams, fd.s_exponent);
      const MatrixXc S = X.exp(), Si = (-X).exp();
      double worst = 0.0;
      for (int k = 0; k < 4; ++k) {
        const MatrixXc lhs = oracle::fermion_fock_matrix(fd.fams, fd.lhs[k]);
        const MatrixXc rhs = S * oracle::fermion_fock_matrix(fd.fams, fd.core[k]) * Si;
        worst = std::max(worst, max_abs(lhs - rhs));
      }
      CHECK(worst < 1e-13);
      const FactorizationResult r = verify_factorization(g, I, J, {0.4, 0.2}, lambda, 8);
      CHECK(r.exact);
      CHECK(r.residual < 1e-12);
    }
  }
}

TEST_CASE("windowed factorization") {
  for (auto [n, m] : {std::pair{2, 0}, {2, 1}}) {
    Grading g(n, m);
    const int N = g.size();
    for (unsigned mi = 1; mi < (1u << N); ++mi)
      for (unsigned mj = 1; mj < (1u << N); ++mj) {
        if (mi & mj) continue;
        const Subset I = Subset::from_mask(mi, N), J = Subset::from_mask(mj, N);
        const FactorizationResult r = verify_factorization(g, I, J, {0.3, -0.2}, 0.7, 10);
        CHECK_MESSAGE(r.residual < 1e-10, to_string(I) << " " << to_string(J));
        CHECK(r.window_states > 0);
        CHECK(r.window_states <= r.total_states);
      }
  }
  CHECK_THROWS_AS(fusion_data(Grading(2, 1), Subset({0}), Subset({0, 1}), 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("induced generators satisfy the superalgebra relations") {
  Grading g(2, 1);
  const Subset I({0}), J({2});
  const FusionData fd = fusion_data(g, I, J, 0.3, 0.7);
  const FamilySet &fs = fd.fams;
  const std::vector<int> labels{0, 2};
  double worst = 0.0;
  for (int a : labels)
    for (int b : labels)
      for (int c : labels)
        for (int d : labels) {
          const OscElement &Eab = fd.induced.at({a, b}), &Ecd = fd.induced.at({c, d});
          OscElement rhs;
          if (c == b) rhs = osc_add(rhs, fd.induced.at({a, d}));
          if (a == d) {
            const int s = (g.parity(a) ^ g.parity(b)) & (g.parity(c) ^ g.parity(d));
            rhs = osc_add(rhs, fd.induced.at({c, b}), s ? 1.0 : -1.0);
          }
          worst = std::max(worst, osc_max_abs(osc_add(osc_supercommutator(fs, Eab, Ecd), rhs, -1.0)));
        }
  CHECK(worst < 1e-12);
}
