#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qop {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// Two twist angles coincide (mod 2pi) where a division by their difference is needed.
// Labels are 0-based.
struct singular_twist : std::runtime_error {
  int a, b;
  singular_twist(int a_, int b_, const std::string &what)
      : std::runtime_error(what), a(a_), b(b_) {}
};

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C^(n|m): labels 0..n-1 are even, n..n+m-1 are odd.
struct Grading {
  int n = 1;
  int m = 0;

  Grading() = default;
  Grading(int n_, int m_);

  int size() const { return n + m; }
  int parity(int a) const { return a < n ? 0 : 1; }
  std::vector<int> parities() const;
};

struct Twists {
  std::vector<double> phi;

  // Phi_A = A * golden * 2pi / (N+1) mod 2pi, A = 1..N.
  static Twists generic(int N);
  static Twists zero(int N) { return Twists{std::vector<double>(N, 0.0)}; }

  int size() const { return static_cast<int>(phi.size()); }
  double operator[](int a) const { return phi[a]; }
  // Throws singular_twist naming the first coincident pair (mod 2pi).
  void require_distinct(double tol = 1e-12) const;
  Twists scaled(double t) const;
};

// 2i sin((phi_a - phi_b)/2)
cplx sine_factor(const Twists &tw, int a, int b);

int ipow(int base, int exp);

// Site labels of a basis index on (C^N)^{x L}; site 1 is most significant.
std::vector<int> site_labels(int index, int N, int L);
int basis_index(const std::vector<int> &labels, int N);

// Parity of each basis state of (C^(n|m))^{x L}.
std::vector<int> basis_parities(const Grading &g, int L);

// Occupation numbers (count of each label) of a basis state.
std::vector<int> occupation(const Grading &g, int L, int index);

// Basis indices grouped by occupation vector, ordered lexicographically by occupation.
std::map<std::vector<int>, std::vector<int>> occupation_sectors(const Grading &g, int L);

template <typename Scalar = cplx>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> graded_permutation(const Grading &g) {
  const int N = g.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> P =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(N * N, N * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      P(a * N + b, b * N + a) = (g.parity(a) & g.parity(b)) ? Scalar(-1) : Scalar(1);
  return P;
}

template <typename Scalar = cplx>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> r_matrix(const Grading &g, Scalar z) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> R = graded_permutation<Scalar>(g);
  R.diagonal().array() += z;
  return R;
}

// Koszul-signed tensor product of operators on graded spaces with the given basis parities.
// (e_ab (x) e_cd) picks up (-1)^{p(b)(p(c)+p(d))}.
template <typename DX, typename DY>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>
graded_kron(const Eigen::MatrixBase<DX> &X, const std::vector<int> &px,
            const Eigen::MatrixBase<DY> &Y, const std::vector<int> &py) {
  using Scalar = typename DX::Scalar;
  const Eigen::Index dx = X.rows(), dy = Y.rows();
  if (X.cols() != dx || Y.cols() != dy || static_cast<Eigen::Index>(px.size()) != dx ||
      static_cast<Eigen::Index>(py.size()) != dy)
    throw std::invalid_argument("graded_kron: shape/parity mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(dx * dy, dx * dy);
  for (Eigen::Index a = 0; a < dx; ++a)
    for (Eigen::Index b = 0; b < dx; ++b)
      for (Eigen::Index c = 0; c < dy; ++c)
        for (Eigen::Index d = 0; d < dy; ++d) {
          Scalar v = X(a, b) * Y(c, d);
          if (px[b] & (py[c] ^ py[d])) v = -v;
          out(a * dy + c, b * dy + d) = v;
        }
  return out;
}

// Basis parities of (C^(n|m))^{x k} where dim = (n+m)^k.
std::vector<int> power_parities(const Grading &g, Eigen::Index dim);

// Same, for operators on tensor powers of C^(n|m).
template <typename DX, typename DY>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>
graded_kron(const Eigen::MatrixBase<DX> &X, const Eigen::MatrixBase<DY> &Y, const Grading &g) {
  return graded_kron(X, power_parities(g, X.rows()), Y, power_parities(g, Y.rows()));
}

template <typename D>
typename D::Scalar supertrace(const Eigen::MatrixBase<D> &X, const std::vector<int> &par) {
  typename D::Scalar s(0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) s += par[i] ? -X(i, i) : X(i, i);
  return s;
}

template <typename D>
typename D::Scalar supertrace(const Eigen::MatrixBase<D> &X, const Grading &g) {
  return supertrace(X, power_parities(g, X.rows()));
}

// Direct form: 2 sum_l (1 - sum_AB (-1)^B e^(l)_AB e^(l+1)_BA), quasiperiodic closure.
MatrixXc hamiltonian_direct(const Grading &g, int L, const Twists &tw);
// 2 sum_l (1 - P_{l,l+1}) with the phase-carrying backward permutation P_{L,1}.
MatrixXc hamiltonian_permutation(const Grading &g, int L, const Twists &tw);
// Direct form; throws std::logic_error if the two forms disagree.
MatrixXc build_hamiltonian(const Grading &g, int L, const Twists &tw);

// Global generator sum_l E^(l)_ab with graded embedding.
MatrixXc global_generator(const Grading &g, int L, int a, int b);

double max_abs(const MatrixXc &X);

}  // namespace qop
