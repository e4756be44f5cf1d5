#pragma once

// Independent reference computations used only by the tests.

#include "qop/bethe.hpp"

#include <random>
#include <stdexcept>

namespace qop::oracle {

struct oracle_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Normalized twisted supertrace by explicit summation over truncated Fock bases with damping
// e^{-eps_f N_f}, eps_f = |1 - q_f| damping / 2^k, k < levels, Richardson-extrapolated to zero.
// cutoff must exceed 60 / min_f eps_f for the damped tails to be negligible.
// Throws oracle_failure when the last two diagonal extrapolants differ by more than tol (relative).
cplx abel_oracle(const FamilySet &fs, const OscElement &x, const std::vector<cplx> &q, int cutoff,
                 double damping, int levels = 2, double tol = 1e-6);

// Graded transposition of sites i and j (0-based) on (C^(n|m))^{x L}, acting on basis states.
MatrixXc site_transposition(const Grading &g, int L, int i, int j);

// Operator X on site `site` of (C^(n|m))^{x L}: |..a..> -> sum_b X_ba |..b..> with the Koszul sign
// of moving X past the earlier sites.
MatrixXc on_site(const Grading &g, int L, int site, const MatrixXc &X);

// Entry of X (x) Y (x) Z from the index-tuple sign rule.
MatrixXc triple_kron(const Grading &g, const MatrixXc &X, const MatrixXc &Y, const MatrixXc &Z);

// 2 sum_l (1 - sum_AB (-1)^B E^(l)_AB E^(l+1)_BA) from on_site matrix units, twisted closure.
MatrixXc hamiltonian_from_units(const Grading &g, int L, const Twists &tw);

// Random trace problem: 1-3 families of random statistics, up to 4 monomials of total degree
// <= 6 (diagonal ones favoured), unit-modulus weights with |q - 1| > 0.1.
struct TraceCase {
  FamilySet fs;
  OscElement x;
  std::vector<cplx> q;
};
TraceCase random_trace_case(std::mt19937_64 &rng);

// abel_oracle with 5 damping levels, relative damping 0.02 and a cutoff deep in the damped tail.
cplx abel_reference(const TraceCase &tc, double tol = 1e-6);

// Fundamental transfer matrix from dense transpositions with the auxiliary space as site 0:
// e^{iz sum (-1)^A Phi_A} Str_0[D_0 (z - P_01) ... (z - P_0L)], D = diag(e^{-i Phi_A}).
MatrixXc fundamental_transfer_dense(const Grading &g, int L, const Twists &tw, cplx z);

// Jordan-Wigner matrix of an element over purely fermionic families (family 0 most significant).
MatrixXc fermion_fock_matrix(const FamilySet &fs, const OscElement &x);

MatrixXc random_matrix(int dim, std::mt19937_64 &rng);
cplx random_complex(std::mt19937_64 &rng, double scale = 1.0);

}  // namespace qop::oracle
