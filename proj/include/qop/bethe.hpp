#pragma once

#include "qop/hasse.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qop {

// A sector whose eigenvalues could not be separated by the probe operators.
struct degeneracy_error : std::runtime_error {
  std::vector<int> occupation;
  degeneracy_error(std::vector<int> occ, const std::string &what)
      : std::runtime_error(what), occupation(std::move(occ)) {}
};

struct EigenSector {
  std::vector<int> occupation;
  std::vector<int> indices;  // basis states of the sector
  MatrixXc V, Vinv;          // columns: joint eigenvectors
  Eigen::VectorXd energies;  // H eigenvalues, ascending
};

struct EigenBasis {
  Grading g;
  int L = 0;
  Twists twists;
  MatrixXc H;
  std::vector<EigenSector> sectors;  // ordered by occupation
  double probe_offdiag = 0.0;        // worst off-diagonal of the probe operators

  int size() const;
};

// Joint eigenbasis of H and all Q_I, sector by sector. The splitting operator is H plus a
// seeded random combination of the Q_I at a probe point; up to 3 probe points are tried.
EigenBasis common_eigenbasis(const Grading &g, int L, const Twists &tw, std::uint64_t seed = 42);

// Eigenvalues of an operator commuting with the basis, state order = sector order.
// offdiag receives the worst off-diagonal entry relative to the diagonal scale.
VectorXc diagonal_values(const EigenBasis &basis, const MatrixXc &X, double *offdiag = nullptr);

// Per-state coefficients (ascending) of Q_I(z) / prefactor(z).
std::vector<std::vector<cplx>> q_eigen_polynomials(const EigenBasis &basis, const Subset &I,
                                                   double trim = 1e-10);

cplx poly_eval(const std::vector<cplx> &c, cplx z);
// Companion-matrix roots polished with two Newton steps.
std::vector<cplx> extract_bethe_roots(const std::vector<cplx> &poly);

// Eigenvalue of the full Q function (prefactor times polynomial).
cplx q_function(const Grading &g, const Subset &I, const Twists &tw, const std::vector<cplx> &poly, cplx z);

struct SpectrumRecord {
  std::vector<int> occupation;
  int sector = 0;
  int state = 0;  // position inside the sector
  double energy = 0.0;
  std::map<Subset, std::vector<cplx>> poly;
  std::map<Subset, std::vector<cplx>> roots;
};

std::vector<SpectrumRecord> spectrum_records(const EigenBasis &basis);

struct RootResidual {
  int level = 0;  // index into the path chain
  cplx root;
  double residual = 0.0;
  bool skipped = false;  // evaluation point hit a zero of a denominator
};

// Nested Bethe equations along a path:
//  same parity at I_i:  -1 = Q_{i-1}(r-1/2)/Q_{i-1}(r+1/2) * Q_i(r+1)/Q_i(r-1) * Q_{i+1}(r-1/2)/Q_{i+1}(r+1/2)
//  mixed parity at I_i:  1 = Q_{i-1}(r+1/2) Q_{i+1}(r-1/2) / (Q_{i-1}(r-1/2) Q_{i+1}(r+1/2))
// residual |lhs / product - 1|.
std::vector<RootResidual> bethe_residuals(const NestingPath &path, const SpectrumRecord &rec,
                                          const Grading &g, const Twists &tw);

// E = 2 sum 1/(1/4 - z^2) (bosonic vacuum) or 4L - 2 sum 1/(1/4 - z^2) (fermionic vacuum).
double energy_from_roots(const std::vector<cplx> &roots, bool fermionic_vacuum, int L);
// Final-level roots of a path.
double path_energy(const NestingPath &path, const SpectrumRecord &rec, int L);

struct PathSummary {
  std::string path;
  std::string grading;
  double max_residual = 0.0;
  int skipped = 0;   // roots whose equation hits a zero of some Q factor
  int singular = 0;  // states whose final-level roots sit on the energy poles
};

struct StateReport {
  SpectrumRecord record;
  std::vector<double> path_energies;  // one per path
  std::vector<double> path_residuals;
  std::vector<int> singular_paths;  // paths with final-level roots at +-1/2 (energy NaN)
  double energy_deviation = 0.0;  // relative, over non-singular paths
  double path_spread = 0.0;
};

struct SpectrumReport {
  Grading g;
  int L = 0;
  Twists twists;
  std::vector<NestingPath> paths;
  std::vector<StateReport> states;
  std::vector<PathSummary> path_summary;
  double max_energy_deviation = 0.0;
  double max_path_spread = 0.0;
  double max_bethe_residual = 0.0;
  int singular_pairs = 0;  // (state, path) pairs without an energy
  std::vector<std::string> errors;
};

SpectrumReport cross_check_spectrum(const Grading &g, int L, const Twists &tw,
                                    const std::vector<NestingPath> &paths, std::uint64_t seed = 42);

// Zero-twist energies: Bethe energies at twists t * tw for 5 geometrically spaced t, extrapolated
// to t = 0 sector by sector (states matched by energy order).
struct ContinuedState {
  std::vector<int> occupation;
  double energy = 0.0;         // extrapolated Bethe energy
  double energy_direct = 0.0;  // zero-twist H eigenvalue, same sector and order
};
std::vector<ContinuedState> continue_to_zero_twist(const Grading &g, int L, const Twists &tw,
                                                   std::uint64_t seed = 42);

// Degrees of Q_I eigenvalue polynomials observed per (occupation, subset).
std::map<std::pair<std::vector<int>, Subset>, std::vector<int>> degree_table(
    const std::vector<SpectrumRecord> &records);

}  // namespace qop
