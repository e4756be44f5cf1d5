#pragma once

#include "qop/lax.hpp"

#include <functional>
#include <vector>

namespace qop {

// L-site monodromy on [module?, site 1, ..., site L]; site L is leftmost in the auxiliary product.
struct Monodromy {
  FamilySet fams;
  FactorLayout layout;
  OscMatrix M;
  int module_dim = 1;
  bool has_module = false;
};

Monodromy monodromy(const LaxOperator &lax, int L);

struct TransferOperator {
  Grading g;
  Subset I;
  ModuleSpec mod;
  int L = 0;
  Twists twists;
  cplx z;
  MatrixXc matrix;
  bool prefactor_applied = true;
};

// e^{i z sum_{A in I} (-1)^{p(A)} Phi_A}
cplx twist_prefactor(const Grading &g, const Subset &I, const Twists &tw, cplx z);

TransferOperator q_operator(const Grading &g, const Subset &I, int L, const Twists &tw, cplx z);
// rep: singlet, fundamental or explicit_table (full set).
TransferOperator t_operator(const Grading &g, const ModuleSpec &rep, int L, const Twists &tw, cplx z);
// Verma module of gl(I), |I| <= 2, highest weight Lambda = (lambda_A) for A in I.
TransferOperator x_plus_operator(const Grading &g, const Subset &I, const std::vector<cplx> &Lambda,
                                 int L, const Twists &tw, cplx z);

struct MatrixPolynomial {
  std::vector<MatrixXc> coeffs;  // c_0 .. c_d

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  MatrixXc operator()(cplx z) const;
};

// Highest k with max|c_k| above rel times the largest coefficient; 0 for the zero polynomial.
int effective_degree(const MatrixPolynomial &P, double rel = 1e-10);

// z_k = 1.37 e^{2 pi i k / (L+2)}, k = 0 .. L+1
std::vector<cplx> interpolation_nodes(int L);

// Interpolates through all samples but the last, then checks the last one (max deviation
// relative to max(1, |sample|) above tol throws std::logic_error).
MatrixPolynomial interpolate_polynomial(const std::vector<std::pair<cplx, MatrixXc>> &samples,
                                        double tol = 1e-9);

// Polynomial part of z -> X(z) / prefactor(z), sampled at the L+2 standard nodes.
MatrixPolynomial operator_polynomial(const std::function<TransferOperator(cplx)> &build, int L,
                                     double tol = 1e-9);

// Largest entry outside the occupation-sector blocks.
double off_sector_residual(const Grading &g, int L, const MatrixXc &X);

// Dense matrix restricted to one occupation sector.
MatrixXc sector_block(const MatrixXc &X, const std::vector<int> &indices);

// Product of sin factors: bos-bos and ferm-ferm pairs over bos-ferm pairs of I.
cplx super_vandermonde(const Grading &g, const Subset &I, const Twists &tw);

}  // namespace qop
