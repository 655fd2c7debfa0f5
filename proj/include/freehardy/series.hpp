#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "freehardy/word.hpp"

namespace freehardy {

using cplx = std::complex<double>;

enum class Side { Left, Right };

/// Finitely supported free power series: a sparse map word -> complex.
///
/// Terms are kept in graded-lex order and exact zeros are never stored.
/// `max_degree()` is the degree up to which the series is known; it bounds
/// the length of every stored word and is carried through truncating
/// operations as a certificate.
class Series {
 public:
  using Terms = std::map<Word, cplx, GradedLess>;

  explicit Series(int d);
  Series(int d, int max_degree);

  /// e_w.
  static Series basis(const Word& w, cplx c = 1.0);
  static Series constant(int d, cplx c);
  /// Convenience builder, e.g. from_terms(2, {{{1, 2}, 0.5}, {{}, 1.0}}).
  static Series from_terms(int d, const std::vector<std::pair<std::vector<int>, cplx>>& terms);

  int alphabet() const noexcept { return d_; }
  int max_degree() const noexcept { return max_degree_; }
  /// Length of the longest word with a non-zero coefficient (-1 for zero).
  int degree() const noexcept;
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  cplx coeff(const Word& w) const;
  /// Sets a coefficient; zero removes the term. Raises max_degree if needed.
  void set(const Word& w, cplx c);
  void add_to(const Word& w, cplx c);
  /// Raises (never lowers below the support) the truncation certificate.
  void set_max_degree(int n);

  double norm() const;
  double norm_squared() const;

  /// Terms of degree <= n.
  Series truncated(int n) const;

  Series operator-() const;
  Series& operator+=(const Series& g);
  Series& operator-=(const Series& g);
  Series& operator*=(cplx s);
  friend Series operator+(Series f, const Series& g) { return f += g; }
  friend Series operator-(Series f, const Series& g) { return f -= g; }
  friend Series operator*(Series f, cplx s) { return f *= s; }
  friend Series operator*(cplx s, Series f) { return f *= s; }

  /// Equal coefficient maps. The truncation certificate is not compared.
  friend bool operator==(const Series& f, const Series& g) { return f.d_ == g.d_ && f.terms_ == g.terms_; }

 private:
  int d_;
  int max_degree_ = 0;
  Terms terms_;
};

/// Largest coefficient modulus of f - g.
double sup_distance(const Series& f, const Series& g);

/// <f, g> = sum conj(f_a) g_a (conjugate-linear in the first argument).
cplx inner_product(const Series& f, const Series& g);

/// L_k f = e_k (x) f or R_k f = f (x) e_k.
Series apply_creation(const Series& f, int k, Side side);
/// Adjoint of a creation operator: deletes a leading (left) or trailing
/// (right) letter k, dropping words that do not start/end with k.
Series apply_creation_adjoint(const Series& f, int k, Side side);
/// L^w f or R^w f, applying the letters of w as in L^w = L_{w1} ... L_{wn}.
Series apply_word(const Series& f, const Word& w, Side side);

/// Concatenation product, (fg)_c = sum over c = ab of f_a g_b, exact up to
/// degree cap and dropped above it.
Series multiply(const Series& f, const Series& g, int degree_cap);

/// The series x with a * x = b through degree n (the expansion of a(Z)^{-1} b(Z)).
/// Throws std::domain_error when a has zero constant term.
Series solve_left(const Series& a, const Series& b, int n);

/// e_w -> e_{w^t}.
Series transpose_unitary(const Series& f);

/// Dense coefficient vector over words of length <= n, indexed by rank.
/// Terms of higher degree are ignored.
Eigen::VectorXcd to_dense(const Series& f, int n);
Series from_dense(int d, const Eigen::VectorXcd& coeffs, int n);

/// Two-component column (top, bottom) in F^2 (x) C^2.
struct SeriesColumn {
  Series top;
  Series bottom;

  SeriesColumn(Series t, Series b);
  int alphabet() const noexcept { return top.alphabet(); }
  double norm_squared() const { return top.norm_squared() + bottom.norm_squared(); }
  double norm() const;
};

cplx inner_product(const SeriesColumn& x, const SeriesColumn& y);

}  // namespace freehardy
