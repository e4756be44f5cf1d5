#include "oracles.hpp"

#include <doctest.h>

using namespace qop;

namespace {

FamilySet two_families(Stat s0, Stat s1) {
  FamilySet fs;
  fs.add(OscFamily{0, 1, s0, 0, false});
  fs.add(OscFamily{0, 2, s1, 0, false});
  return fs;
}

OscElement random_element(const FamilySet &fs, std::mt19937_64 &rng) {
  OscElement x;
  std::uniform_int_distribution<int> e(0, 2);
  for (int t = 0; t < 4; ++t) {
    Monomial mono(2 * fs.size());
    for (int f = 0; f < fs.size(); ++f) {
      const int cap = fs.fermionic(f) ? 1 : 2;
      mono[2 * f] = static_cast<std::uint8_t>(std::min(cap, e(rng)));
      mono[2 * f + 1] = static_cast<std::uint8_t>(std::min(cap, e(rng)));
    }
    x = osc_add(x, osc_monomial(fs, mono, oracle::random_complex(rng)));
  }
  return x;
}

double diff(const OscElement &a, const OscElement &b) { return osc_max_abs(osc_add(a, b, -1.0)); }

}  // namespace

TEST_CASE("canonical commutation relations") {
  for (Stat s : {Stat::boson, Stat::fermion}) {
    FamilySet fs;
    fs.add(OscFamily{0, 1, s, 0, false});
    const OscElement a = osc_annihilate(fs, 0), ad = osc_create(fs, 0);
    const OscElement one = osc_scalar(fs, 1.0);
    CHECK(osc_supercommutator(fs, a, ad) == one);
    const OscElement n = osc_mul(fs, ad, a);
    const double sign = s == Stat::boson ? 1.0 : -1.0;
    CHECK(diff(osc_mul(fs, a, ad), osc_add(one, n, sign)) == 0.0);
    CHECK(osc_parity(fs, a) == (s == Stat::fermion ? 1 : 0));
  }
}

TEST_CASE("fermions are nilpotent and anticommute across families") {
  const FamilySet fs = two_families(Stat::fermion, Stat::fermion);
  CHECK(osc_mul(fs, osc_create(fs, 0), osc_create(fs, 0)).empty());
  CHECK(osc_mul(fs, osc_annihilate(fs, 1), osc_annihilate(fs, 1)).empty());
  const OscElement c0 = osc_create(fs, 0), c1 = osc_annihilate(fs, 1);
  CHECK(osc_add(osc_mul(fs, c0, c1), osc_mul(fs, c1, c0)).empty());
  const FamilySet mixed = two_families(Stat::boson, Stat::fermion);
  const OscElement b = osc_create(mixed, 0), f = osc_annihilate(mixed, 1);
  CHECK(diff(osc_mul(mixed, b, f), osc_mul(mixed, f, b)) == 0.0);
}

TEST_CASE("boson powers") {
  FamilySet fs;
  fs.add(OscFamily{0, 1, Stat::boson, 0, false});
  const OscElement a = osc_annihilate(fs, 0), ad = osc_create(fs, 0);
  // a a+^2 = a+^2 a + 2 a+
  const OscElement lhs = osc_mul(fs, a, osc_mul(fs, ad, ad));
  const OscElement rhs = osc_add(osc_monomial(fs, {2, 1}), osc_monomial(fs, {1, 0}, 2.0));
  CHECK(diff(lhs, rhs) == 0.0);
  CHECK(osc_degree(rhs) == 3);
}

TEST_CASE("product is associative") {
  std::mt19937_64 rng(3);
  for (auto [s0, s1] : {std::pair{Stat::boson, Stat::boson}, {Stat::boson, Stat::fermion},
                        {Stat::fermion, Stat::fermion}}) {
    const FamilySet fs = two_families(s0, s1);
    for (int rep = 0; rep < 5; ++rep) {
      const OscElement x = random_element(fs, rng), y = random_element(fs, rng), z = random_element(fs, rng);
      const OscElement l = osc_mul(fs, osc_mul(fs, x, y), z), r = osc_mul(fs, x, osc_mul(fs, y, z));
      CHECK(diff(l, r) < 1e-12 * std::max(1.0, osc_max_abs(l)));
    }
  }
}

TEST_CASE("grading automorphism and pruning") {
  const FamilySet fs = two_families(Stat::boson, Stat::fermion);
  const OscElement x = osc_add(osc_monomial(fs, {1, 0, 1, 0}), osc_monomial(fs, {1, 1, 1, 1}, 2.0));
  CHECK(osc_parity(fs, x) == -1);
  const OscElement gx = osc_grade(fs, x);
  CHECK(gx.terms.at({1, 0, 1, 0}) == cplx(-1.0));
  CHECK(gx.terms.at({1, 1, 1, 1}) == cplx(2.0));
  CHECK(osc_prune(osc_add(x, osc_monomial(fs, {0, 0, 0, 0}, 1e-15)), 1e-12) == x);
}

TEST_CASE("family_trace closed forms") {
  const cplx q = std::polar(1.0, 1.1);
  for (Stat s : {Stat::boson, Stat::fermion}) {
    FamilySet fs;
    fs.add(OscFamily{0, 1, s, 0, false});
    const cplx ratio = q / (1.0 - q);
    CHECK(std::abs(family_trace(fs, osc_scalar(fs, 3.0), {q}) - 3.0) < 1e-15);
    const cplx n = family_trace(fs, osc_monomial(fs, {1, 1}), {q});
    CHECK(std::abs(n - (s == Stat::boson ? ratio : -ratio)) < 1e-14);
    // odd or off-diagonal elements trace to zero
    CHECK(family_trace(fs, osc_create(fs, 0), {q}) == cplx(0.0));
    CHECK_THROWS_AS(family_trace(fs, osc_scalar(fs, 1.0), {cplx(1.0)}), singular_twist);
  }
  FamilySet fs;
  fs.add(OscFamily{0, 1, Stat::boson, 0, false});
  const cplx r = q / (1.0 - q);
  CHECK(std::abs(family_trace(fs, osc_monomial(fs, {2, 2}), {q}) - 2.0 * r * r) < 1e-14);
  CHECK(family_trace(fs, osc_monomial(fs, {2, 1}), {q}) == cplx(0.0));
}

TEST_CASE("family_trace agrees with damped summation") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 12; ++i) {
    const oracle::TraceCase tc = oracle::random_trace_case(rng);
    const cplx ref = oracle::abel_reference(tc);
    const cplx got = family_trace(tc.fs, tc.x, tc.q);
    CHECK(std::abs(got - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("abel oracle reports non-convergence") {
  FamilySet fs;
  fs.add(OscFamily{0, 1, Stat::boson, 0, false});
  // a coarse single-level tableau cannot meet a tight tolerance
  CHECK_THROWS_AS(oracle::abel_oracle(fs, osc_monomial(fs, {3, 3}), {std::polar(1.0, 0.3)}, 400, 0.05, 2, 1e-12),
                  oracle::oracle_failure);
  CHECK_THROWS_AS(oracle::abel_oracle(fs, osc_monomial(fs, {3, 3}), {cplx(-1.0)}, 4, 0.05, 2), std::invalid_argument);
}

TEST_CASE("verma chain traces") {
  const cplx q = std::polar(1.0, 2.0);
  CHECK(std::abs(verma_chain_trace(ModuleChain::gl2_verma, q, {1.0}) - 1.0 / (1.0 - q)) < 1e-14);
  CHECK(std::abs(verma_chain_trace(ModuleChain::gl2_verma, q, {0.0, 1.0}) - q / ((1.0 - q) * (1.0 - q))) < 1e-14);
  // sum k^2 q^k = q (1 + q) / (1 - q)^3
  CHECK(std::abs(verma_chain_trace(ModuleChain::gl2_verma, q, {0.0, 0.0, 1.0}) -
                 q * (1.0 + q) / std::pow(1.0 - q, 3)) < 1e-13);
  CHECK(std::abs(verma_chain_trace(ModuleChain::gl11, q, {2.0, 3.0}) - (2.0 - 5.0 * q)) < 1e-14);
  CHECK_THROWS_AS(verma_chain_trace(ModuleChain::gl2_verma, 1.0, {1.0}), singular_twist);
}
