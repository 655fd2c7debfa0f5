#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "freehardy/nceval.hpp"
#include "freehardy/series.hpp"

namespace freehardy {

/// Right multiplication x(Z) -> x(Z) T(Z) by a polynomial T(Z) = f(Z) or a
/// rational symbol T(Z) = a(Z)^{-1} b(Z) with a_0 != 0.
///
/// A polynomial symbol is stored as the pair (1, f). The domain used at
/// truncation degree N is {q * a : deg q <= N - deg a}, on which the operator
/// acts exactly as q * a -> q * b.
struct MultiplicationOperator {
  Series denominator;
  Series numerator;
  bool rational = false;

  static MultiplicationOperator polynomial(Series f);
  static MultiplicationOperator rational_symbol(Series a_den, Series b_num);

  int alphabet() const noexcept { return numerator.alphabet(); }
  /// deg f for polynomials, max(deg a, deg b) for rational symbols.
  int degree() const noexcept;
  /// Power series of T(Z) through degree n.
  Series expanded(int n) const;
  /// T(Z) = a(Z)^{-1} b(Z).
  Eigen::MatrixXcd value_at(const MatrixPoint& z) const;
};

/// M^L_g = U M^R_{g^t} U with U the transpose unitary: the operator whose
/// symbols are the transposes of T's.
MultiplicationOperator conjugate_by_transpose(const MultiplicationOperator& t);

/// Dense matrix of p -> p * f from words of length <= n into words of length
/// <= out_degree (graded-lex basis). out_degree defaults to n + deg f.
Eigen::MatrixXcd right_mult_matrix(const Series& f, int n, std::optional<int> out_degree = std::nullopt);
/// Rational symbols are expanded through degree n + deg b + 4 first.
Eigen::MatrixXcd right_mult_matrix(const MultiplicationOperator& t, int n);

/// Gram matrix <e_a * f, e_b * f> over words of length <= n. Non-zero only
/// when one word is a prefix of the other.
Eigen::SparseMatrix<cplx> right_mult_gram(const Series& f, int n);

enum class LinearSolver { Auto, Cholesky, ConjugateGradient };

struct SolveOptions {
  LinearSolver solver = LinearSolver::Auto;
  double cg_tolerance = 1e-15;
  int cg_max_iterations = 10000;
};

struct VnSolution {
  Series g;       // minimizer, in the truncated domain
  Series tg;      // T g
  double normal_residual = 0.0;  // ||H q - rhs|| / ||rhs||
  Eigen::Index unknowns = 0;
  bool used_cg = false;
};

/// Minimizes ||h - g||^2 + ||T g||^2 over g in the degree-n domain by solving
/// the normal equations (A^*A + B^*B) q = A^* h, g = q * a.
/// For polynomial symbols this is (I + M^*M) g = h.
VnSolution vn_solve(const MultiplicationOperator& t, const Series& h, int n, const SolveOptions& opts = {});

struct InnerOuterOptions {
  int margin = 4;  // extra working degree beyond the validity degree
  SolveOptions solve;
};

struct InnerOuterPair {
  Series a;
  Series b;
  double normalizer = 0.0;  // ||X^* 1|| = <Delta^{-1} 1, 1>^{1/2} at working degree
  int degree = 0;           // N, validity degree
  int work_degree = 0;      // N + margin
  double wandering_residual = 0.0;
  double column_norm_residual = 0.0;
  double normal_residual = 0.0;
};

/// Normalized wandering vector (a, b) of the graph of T, with a_0 > 0.
InnerOuterPair inner_outer(const MultiplicationOperator& t, int n, const InnerOuterOptions& opts = {});

/// <theta, (L^w (x) I_2) theta>.
cplx wandering_inner(const SeriesColumn& theta, const Word& w);
/// max over 1 <= |w| <= max_len of |<theta, (L^w (x) I_2) theta>|.
double wandering_residual(const SeriesColumn& theta, int max_len);

struct WanderingSpace {
  int dim = 0;
  std::vector<SeriesColumn> basis;
  std::vector<double> singular_values;  // relative to the generator norm
};

/// G_N(T) minus the span of (L_k (x) I_2) G_{N-1}(T).
WanderingSpace wandering_space(const MultiplicationOperator& t, int n, double tol = 1e-6,
                               const SolveOptions& opts = {});

struct OuterDiagnostics {
  cplx constant_term;
  std::optional<double> min_singular;  // over the sample points
  double range_distance = 1.0;         // dist(1, {q * a : deg q <= n})
};

OuterDiagnostics is_outer(const Series& a, int n, const std::vector<MatrixPoint>& points);

struct LocalityReport {
  bool local = true;
  double max_residual = 0.0;
  int checked = 0;
};

/// Checks that L_k^* maps the degree-n domain {q * a} intersected with
/// ran L back into the domain, to within tol.
LocalityReport is_local(const Series& domain_generator, int n, double tol = 1e-8);
LocalityReport is_local(const MultiplicationOperator& t, int n, double tol = 1e-8);

struct DivergenceReport {
  std::vector<int> degrees;
  std::vector<double> left_norms;   // ||(H f) restricted to degree <= N||
  std::vector<double> right_norms;  // ||(f H) restricted to degree <= N||
};

/// Partial norms of the expansions of H(Z) f(Z) and f(Z) H(Z).
DivergenceReport divergence_witness(const MultiplicationOperator& h, const Series& f, int nmax);

}  // namespace freehardy
