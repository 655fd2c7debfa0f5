#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "freehardy/graph.hpp"
#include "freehardy/sampling.hpp"

using namespace freehardy;

namespace {

Series e(int d, std::vector<int> w, cplx c = 1.0) { return Series::basis(Word(d, std::move(w)), c); }
Series one(int d) { return Series::constant(d, 1.0); }

MultiplicationOperator rational_test() {
  return MultiplicationOperator::rational_symbol(one(2) - e(2, {2}), e(2, {1}));
}

// Stacked dense generator matrix of the truncated graph {q a (+) q b : |q| <= nq}
// as coefficient vectors over words of length <= out (top block, then bottom).
Eigen::MatrixXcd graph_generators(const MultiplicationOperator& t, int nq, int out) {
  const Eigen::MatrixXcd a = right_mult_matrix(t.denominator, nq, out);
  const Eigen::MatrixXcd b = right_mult_matrix(t.numerator, nq, out);
  Eigen::MatrixXcd g(a.rows() + b.rows(), a.cols());
  g << a, b;
  return g;
}

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > 1e-12 * top) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Dense oracle for the wandering space: orthonormal bases of G_N and of the
// image of G_{N-1} under L (x) I_2, then the SVD of the projected complement.
Eigen::VectorXd dense_wandering_singular_values(const MultiplicationOperator& t, int n) {
  const int deg_a = std::max(t.denominator.degree(), 0);
  const int nq = n - deg_a;
  const int out = nq + t.degree();
  const Eigen::MatrixXcd big = orthonormal_basis(graph_generators(t, nq, out));
  const Eigen::MatrixXcd small_gen = graph_generators(t, nq - 1, out - 1);
  // Apply L_k (x) I_2 to every generator of G_{N-1}.
  const int d = t.alphabet();
  const auto rows_small = static_cast<Eigen::Index>(count_words(d, out - 1));
  const auto rows_big = static_cast<Eigen::Index>(count_words(d, out));
  const std::vector<Word> words = enumerate_words(d, out - 1);
  Eigen::MatrixXcd shifted = Eigen::MatrixXcd::Zero(2 * rows_big, d * small_gen.cols());
  for (int k = 1; k <= d; ++k) {
    for (Eigen::Index c = 0; c < small_gen.cols(); ++c) {
      for (Eigen::Index r = 0; r < rows_small; ++r) {
        const auto target = static_cast<Eigen::Index>(rank(concat(Word(d, {k}), words[static_cast<std::size_t>(r)])));
        shifted(target, (k - 1) * small_gen.cols() + c) = small_gen(r, c);
        shifted(rows_big + target, (k - 1) * small_gen.cols() + c) = small_gen(rows_small + r, c);
      }
    }
  }
  const Eigen::MatrixXcd s = orthonormal_basis(shifted);
  const Eigen::MatrixXcd complement = big - s * (s.adjoint() * big);
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(complement).singularValues();
}

}  // namespace

TEST_CASE("right multiplication matrices") {
  const Eigen::MatrixXcd id = right_mult_matrix(one(2), 3);
  CHECK(id.isApprox(Eigen::MatrixXcd::Identity(15, 15)));

  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(4, 3);
  shift(1, 0) = shift(2, 1) = shift(3, 2) = 1.0;
  CHECK(right_mult_matrix(e(1, {1}), 2) == shift);

  const Eigen::MatrixXcd m = right_mult_matrix(e(2, {1}) - e(2, {2}), 4);
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues().minCoeff() > 0.1);

  // Column w is the coefficient vector of e_w * f.
  Sampler rng(1);
  const Series f = rng.sparse_polynomial(2, 2, 4);
  const Eigen::MatrixXcd mf = right_mult_matrix(f, 2);
  const auto words = enumerate_words(2, 2);
  for (std::size_t j = 0; j < words.size(); ++j) {
    const Series col = multiply(Series::basis(words[j]), f, 10);
    CHECK((mf.col(static_cast<Eigen::Index>(j)) - to_dense(col, 2 + f.degree())).norm() == 0.0);
  }
}

TEST_CASE("right multiplication Gram equals M^* M") {
  Sampler rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 1 + trial % 3;
    const Series f = rng.sparse_polynomial(d, 3, 5);
    const int n = 3;
    const Eigen::MatrixXcd m = right_mult_matrix(f, n);
    const Eigen::MatrixXcd gram = Eigen::MatrixXcd(right_mult_gram(f, n));
    CHECK((gram - m.adjoint() * m).norm() <= 1e-12 * (1.0 + gram.norm()));
  }
}

TEST_CASE("von Neumann solve examples") {
  Sampler rng(3);
  const Series h = rng.polynomial(2, 3);
  const VnSolution zero = vn_solve(MultiplicationOperator::polynomial(Series(2)), h, 3);
  CHECK(sup_distance(zero.g, h) <= 1e-14);

  const VnSolution shift = vn_solve(MultiplicationOperator::polynomial(e(1, {1})), one(1), 6);
  CHECK(sup_distance(shift.g, Series::constant(1, 0.5)) <= 1e-14);

  const cplx c{0.6, -1.3};
  const VnSolution constant = vn_solve(MultiplicationOperator::polynomial(Series::constant(2, c)), one(2), 4);
  CHECK(sup_distance(constant.g, Series::constant(2, 1.0 / (1.0 + std::norm(c)))) <= 1e-14);
}

TEST_CASE("von Neumann solve matches a dense normal-equation oracle") {
  Sampler rng(4);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 4;
    const Series f = rng.sparse_polynomial(2, 2, 4);
    const Series h = rng.polynomial(2, n);
    const VnSolution sol = vn_solve(MultiplicationOperator::polynomial(f), h, n);
    const Eigen::MatrixXcd m = right_mult_matrix(f, n);
    const Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(m.cols(), m.cols()) + m.adjoint() * m;
    const Eigen::VectorXcd g = lhs.ldlt().solve(to_dense(h, n));
    CHECK((to_dense(sol.g, n) - g).norm() <= 1e-10 * g.norm());
    CHECK(sol.normal_residual <= 1e-10);
    CHECK(sol.g.norm() <= h.norm() * (1.0 + 1e-12));
    CHECK(sup_distance(sol.tg, multiply(sol.g, f, n + f.degree())) <= 1e-12);
  }
}

TEST_CASE("von Neumann solve on a rational domain matches the dense oracle") {
  const MultiplicationOperator t = rational_test();
  const int n = 6;
  const int nq = n - 1;
  const VnSolution sol = vn_solve(t, one(2), n);
  const Eigen::MatrixXcd a = right_mult_matrix(t.denominator, nq);
  const Eigen::MatrixXcd b = right_mult_matrix(t.numerator, nq);
  const Eigen::MatrixXcd lhs = a.adjoint() * a + b.adjoint() * b;
  const Eigen::VectorXcd q = lhs.ldlt().solve(a.adjoint() * to_dense(one(2), n));
  const Series g = multiply(from_dense(2, q, nq), t.denominator, n);
  CHECK(sup_distance(sol.g, g) <= 1e-12);
}

TEST_CASE("conjugate gradient and Cholesky agree") {
  const MultiplicationOperator t = rational_test();
  SolveOptions cg;
  cg.solver = LinearSolver::ConjugateGradient;
  SolveOptions chol;
  chol.solver = LinearSolver::Cholesky;
  const VnSolution a = vn_solve(t, one(2), 8, cg);
  const VnSolution b = vn_solve(t, one(2), 8, chol);
  CHECK(a.used_cg);
  CHECK_FALSE(b.used_cg);
  CHECK(sup_distance(a.g, b.g) <= 1e-10);
}

TEST_CASE("inner-outer pairs in closed form") {
  const double s = 1.0 / std::sqrt(2.0);
  const InnerOuterPair z = inner_outer(MultiplicationOperator::polynomial(e(1, {1})), 10);
  CHECK(sup_distance(z.a, Series::constant(1, s)) <= 1e-8);
  CHECK(sup_distance(z.b, e(1, {1}, s)) <= 1e-8);
  CHECK(z.normalizer == doctest::Approx(s).epsilon(1e-12));
  CHECK(z.wandering_residual <= 1e-14);

  for (cplx c : {cplx(1.0), cplx(0.0, 2.0), cplx(-0.5)}) {
    const InnerOuterPair p = inner_outer(MultiplicationOperator::polynomial(Series::constant(2, c)), 6);
    const double k = 1.0 / std::sqrt(1.0 + std::norm(c));
    CHECK(sup_distance(p.a, Series::constant(2, k)) <= 1e-8);
    CHECK(sup_distance(p.b, Series::constant(2, c * k)) <= 1e-8);
  }
}

TEST_CASE("inner-outer pair invariants for polynomial symbols") {
  Sampler rng(5);
  for (const Series& f : {e(2, {1}), e(2, {1}) - e(2, {2}), rng.sparse_polynomial(2, 2, 4)}) {
    const int n = 8;
    const InnerOuterPair p = inner_outer(MultiplicationOperator::polynomial(f), n);
    CHECK(p.a.coeff(Word(2)).real() > 0.0);
    CHECK(p.a.coeff(Word(2)).imag() == 0.0);
    CHECK(std::abs(p.a.norm_squared() + p.b.norm_squared() - 1.0) <= 1e-10);
    CHECK(p.column_norm_residual <= 1e-10);
    const int window = n - f.degree();
    CHECK(sup_distance(p.b.truncated(window), multiply(p.a, f, window)) <= 1e-12);
  }
  const InnerOuterPair e1 = inner_outer(MultiplicationOperator::polynomial(e(2, {1})), 8);
  CHECK(e1.wandering_residual <= 1e-14);
}

TEST_CASE("rational Smirnov symbol") {
  const MultiplicationOperator t = rational_test();
  const InnerOuterPair p = inner_outer(t, 10);
  CHECK(p.wandering_residual <= 1e-6);
  CHECK(p.column_norm_residual <= 1e-10);
  CHECK(p.a.coeff(Word(2)).real() > 0.0);

  // a(Z)^{-1} b(Z) against (1 - Z_2)^{-1} Z_1.
  const auto pts = sample_points(2, 10, {3, 0.5, 42, false});
  for (const auto& z : pts) {
    const Eigen::MatrixXcd lhs = eval(p.a, z).partialPivLu().solve(eval(p.b, z));
    CHECK((lhs - t.value_at(z)).norm() <= 1e-6);
  }

  // Refining the degree only changes high-order coefficients.
  const InnerOuterPair q = inner_outer(t, 12);
  CHECK(sup_distance(p.a.truncated(8), q.a.truncated(8)) <= 1e-6);
  CHECK(sup_distance(p.b.truncated(8), q.b.truncated(8)) <= 1e-6);

  // Representation (a u, b u) with a unit constant u gives the same pair.
  const cplx u = std::polar(1.0, 0.7);
  const InnerOuterPair r =
      inner_outer(MultiplicationOperator::rational_symbol(t.denominator * u, t.numerator * u), 10);
  CHECK(sup_distance(p.a, r.a) <= 1e-8);
  CHECK(sup_distance(p.b, r.b) <= 1e-8);
}

TEST_CASE("the naive pair of the rational symbol is not wandering") {
  const double s = 1.0 / std::sqrt(3.0);
  const SeriesColumn naive((one(2) - e(2, {2})) * s, e(2, {1}) * s);
  CHECK(std::abs(wandering_inner(naive, Word(2, {2})) - cplx(-1.0 / 3.0)) <= 1e-12);
  CHECK(wandering_residual(naive, 5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("wandering space dimension") {
  const MultiplicationOperator zero = MultiplicationOperator::polynomial(Series(2));
  const WanderingSpace w0 = wandering_space(zero, 6);
  REQUIRE(w0.dim == 1);
  CHECK(sup_distance(w0.basis[0].top, one(2)) <= 1e-14);
  CHECK(w0.basis[0].bottom.is_zero());

  const WanderingSpace wz = wandering_space(MultiplicationOperator::polynomial(e(1, {1})), 6);
  REQUIRE(wz.dim == 1);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(sup_distance(wz.basis[0].top, Series::constant(1, s)) <= 1e-12);
  CHECK(sup_distance(wz.basis[0].bottom, e(1, {1}, s)) <= 1e-12);

  const WanderingSpace w1 = wandering_space(MultiplicationOperator::polynomial(e(2, {1})), 6);
  REQUIRE(w1.dim == 1);
  CHECK(wandering_residual(w1.basis[0], 5) <= 1e-14);

  for (const MultiplicationOperator& t : {MultiplicationOperator::polynomial(e(2, {1}) - e(2, {2})), rational_test()}) {
    for (int n : {8, 10}) CHECK(wandering_space(t, n).dim == 1);
  }
  CHECK_THROWS_AS(wandering_space(MultiplicationOperator::polynomial(e(2, {1, 2})), 2), std::invalid_argument);
}

TEST_CASE("wandering space matches a dense SVD oracle") {
  Sampler rng(6);
  const std::vector<MultiplicationOperator> symbols = {
      MultiplicationOperator::polynomial(e(2, {1})),
      MultiplicationOperator::polynomial(e(2, {1}) - e(2, {2})),
      MultiplicationOperator::polynomial(rng.sparse_polynomial(2, 2, 4)),
      rational_test(),
  };
  for (const auto& t : symbols) {
    const int n = t.degree() + 3;
    const Eigen::VectorXd sv = dense_wandering_singular_values(t, n);
    int dense_dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) dense_dim += sv(i) > 1e-6 * std::max(1.0, sv(0)) ? 1 : 0;
    CHECK(dense_dim == 1);
    CHECK(wandering_space(t, n).dim == dense_dim);
  }
}

TEST_CASE("the wandering vector is the normalized projection of 1") {
  const MultiplicationOperator t = rational_test();
  const WanderingSpace ws = wandering_space(t, 7);
  InnerOuterOptions opts;
  opts.margin = 0;
  const InnerOuterPair p = inner_outer(t, 7, opts);
  REQUIRE(ws.dim == 1);
  CHECK(sup_distance(ws.basis[0].top, p.a) <= 1e-10);
  CHECK(sup_distance(ws.basis[0].bottom, p.b) <= 1e-10);
}

TEST_CASE("outer diagnostics") {
  const Series a = one(2) - e(2, {2}, 0.5);
  std::vector<MatrixPoint> nilpotent;
  for (const Word& w : enumerate_words(2, 2)) nilpotent.push_back(word_point(w, 0.9).z);
  double last = 1.0;
  for (int n : {2, 4, 8, 12}) {
    const OuterDiagnostics diag = is_outer(a, n, nilpotent);
    CHECK(diag.constant_term == cplx(1.0));
    REQUIRE(diag.min_singular.has_value());
    CHECK(*diag.min_singular > 0.0);
    CHECK(diag.range_distance < last);
    last = diag.range_distance;
  }
  CHECK(last <= 1e-3);

  const OuterDiagnostics scaled = is_outer(a * 0.5, 8, nilpotent);
  CHECK(*scaled.min_singular > 0.0);
  CHECK(scaled.range_distance == doctest::Approx(is_outer(a, 8, nilpotent).range_distance).epsilon(1e-9));

  for (int n : {2, 6}) CHECK(is_outer(e(2, {1}), n, nilpotent).range_distance == 1.0);
}

TEST_CASE("locality") {
  CHECK(is_local(MultiplicationOperator::polynomial(e(2, {1}) - e(2, {2})), 6).local);
  const LocalityReport rational = is_local(rational_test(), 8);
  CHECK(rational.local);
  CHECK(rational.max_residual <= 1e-8);
  CHECK(rational.checked > 0);
  const LocalityReport artificial = is_local(e(2, {1}), 6);
  CHECK_FALSE(artificial.local);
  CHECK(artificial.max_residual == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("divergence witness") {
  const MultiplicationOperator h = rational_test();
  const DivergenceReport unit = divergence_witness(h, one(2), 40);
  for (std::size_t i = 0; i < unit.degrees.size(); ++i) {
    const double n = unit.degrees[i];
    CHECK(unit.left_norms[i] * unit.left_norms[i] >= n - 1e-9);
    if (i > 0) CHECK(unit.left_norms[i] > unit.left_norms[i - 1]);
  }
  const DivergenceReport shifted = divergence_witness(h, e(2, {1}), 20);
  for (std::size_t i = 0; i < shifted.degrees.size(); ++i) {
    CHECK(shifted.left_norms[i] * shifted.left_norms[i] >= shifted.degrees[i] - 1 - 1e-9);
  }
  const DivergenceReport contrast = divergence_witness(h, one(2) - e(2, {2}), 40);
  for (double r : contrast.right_norms) CHECK(r <= 1.01);
  CHECK_THROWS(divergence_witness(h, Series(2), 5));
}

TEST_CASE("transpose conjugation turns right multipliers into left ones") {
  Sampler rng(7);
  const Series f = rng.sparse_polynomial(2, 3, 5);
  const Series p = rng.sparse_polynomial(2, 3, 5);
  const MultiplicationOperator t = conjugate_by_transpose(MultiplicationOperator::polynomial(f));
  const Series left = transpose_unitary(multiply(transpose_unitary(p), t.numerator, 10));
  CHECK(sup_distance(left, multiply(f, p, 10)) <= 1e-14);
}
