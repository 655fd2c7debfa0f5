#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "freehardy/nceval.hpp"

namespace freehardy {

/// Interpolation node Z (level n) with scalar-coefficient target W (n x n).
struct PickDatum {
  MatrixPoint z;
  Eigen::MatrixXcd w;

  PickDatum(MatrixPoint z, Eigen::MatrixXcd w);
};

/// Row/column label (point, a, b) of a block Gram matrix.
struct GramIndex {
  int point;
  int a;
  int b;
};

/// Hermitian matrix with entries ((k,a,b),(j,c,d)) = (Phi_kj[E_bd])_ac.
struct GramMatrix {
  Eigen::MatrixXcd entries;
  std::vector<GramIndex> index;
};

enum class GramMethod { Closed, Truncated };

/// Plain Szego Gram <K{Z^k, e_a, e_b}, K{Z^j, e_c, e_d}> = K(Z^k, Z^j)[e_b e_d^*]_{ac}.
/// The truncated method sums kernel vectors through degree n.
GramMatrix szego_gram(const std::vector<MatrixPoint>& points, GramMethod method = GramMethod::Closed, int n = 0);

/// Entrywise certificate for |closed - truncated(n)|: r_k^{n+1} r_j^{n+1} / sqrt((1-r_k^2)(1-r_j^2)).
Eigen::MatrixXd gram_tail_bound(const std::vector<MatrixPoint>& points, int n);

/// Generic assembly: phi(k, j, K_kj, P) returns the n_k x n_j block image of P.
using BlockMap = std::function<Eigen::MatrixXcd(int k, int j, const SzegoKernel& kernel, const Eigen::MatrixXcd& p)>;
GramMatrix assemble_gram(const std::vector<MatrixPoint>& points, const BlockMap& phi);

struct PsdVerdict {
  bool feasible = false;
  double min_eig = 0.0;
  double norm = 0.0;        // spectral norm of the Gram matrix
  double hermiticity = 0.0; // max |G - G^*|
  Eigen::Index dim = 0;
};

inline constexpr double kDefaultPsdTol = 1e-9;

/// Feasible iff min eigenvalue >= -tol * max(1, ||G||_2).
PsdVerdict psd_verdict(const Eigen::MatrixXcd& g, double tol = kDefaultPsdTol);

/// Left:  K[E] - W_k K[E] W_j^*.   Right: K[E] - K[W_k E W_j^*].
GramMatrix pick_matrix(const std::vector<PickDatum>& data, Side side);
PsdVerdict pick_check(const std::vector<PickDatum>& data, Side side, double tol = kDefaultPsdTol);

/// Left:  B_k K[E] B_j^* - A_k K[E] A_j^*.   Right: K[B_k E B_j^*] - K[A_k E A_j^*].
GramMatrix leech_matrix(const std::vector<MatrixPoint>& points, const std::vector<Eigen::MatrixXcd>& a_values,
                        const std::vector<Eigen::MatrixXcd>& b_values, Side side);
PsdVerdict leech_check(const std::vector<MatrixPoint>& points, const std::vector<Eigen::MatrixXcd>& a_values,
                       const std::vector<Eigen::MatrixXcd>& b_values, Side side, double tol = kDefaultPsdTol);

struct MembershipReport {
  double lambda = 0.0;
  double condition = 0.0;  // of the Szego Gram before any shift
  double shift = 0.0;      // diagonal regularization applied
};

/// Smallest lambda with lambda^2 K - f(.)(.)f(.)^* >= 0 on the given points:
/// lambda^2 = max eig of G_K^{-1/2} G_f G_K^{-1/2}.
MembershipReport membership_lambda(const Series& f, const std::vector<MatrixPoint>& points);

struct SmirnovFormReport {
  double max_residual = 0.0;  // max_k ||f(Z)(I - B(Z)) - A(Z)||_F
  double max_b_norm = 0.0;    // max_k ||B(Z)||_2
  bool contractive = true;    // every ||B(Z)|| < 1
  bool pass = false;
};

/// Checks f(Z) (I - B(Z)) = A(Z) at the sample points. Requires B_0 = 0.
SmirnovFormReport smirnov_form_check(const Series& f, const Series& a, const Series& b,
                                     const std::vector<MatrixPoint>& points, double tol);
/// Same check with f given by its values at the points (e.g. a rational symbol).
SmirnovFormReport smirnov_form_check(const std::vector<Eigen::MatrixXcd>& f_values, const Series& a, const Series& b,
                                     const std::vector<MatrixPoint>& points, double tol);

}  // namespace freehardy
