#include "freehardy/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace freehardy {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

// Rank arithmetic for the words of length <= n: rank(uv) splits into the
// level offset of |uv| plus lex(u) d^{|v|} + lex(v).
struct GradedIndex {
  int d;
  int n;
  std::vector<std::uint64_t> offset;  // offset[k] = rank of the first word of length k
  std::vector<std::uint64_t> power;   // power[k] = d^k

  GradedIndex(int d_, int n_) : d(d_), n(n_) {
    for (int k = 0; k <= n + 1; ++k) {
      offset.push_back(level_offset(d, k));
      power.push_back(ipow(d, k));
    }
  }
  Eigen::Index size() const { return static_cast<Eigen::Index>(offset[static_cast<std::size_t>(n) + 1]); }
  Eigen::Index at(int len, std::uint64_t lex) const {
    return static_cast<Eigen::Index>(offset[static_cast<std::size_t>(len)] + lex);
  }
};

Word prefix_of(const Word& w, std::size_t len) {
  return Word(w.alphabet(), std::vector<int>(w.letters().begin(), w.letters().begin() + static_cast<long>(len)));
}

// (A^* h)_u = sum_c conj(a_c) h_{uc}, over words u of length <= n.
Eigen::VectorXcd adjoint_right_mult(const Series& a, const Series& h, int n) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(count_words(a.alphabet(), n)));
  for (const auto& [w, hw] : h.terms()) {
    for (const auto& [c, ac] : a.terms()) {
      if (c.length() > w.length()) break;
      if (static_cast<int>(w.length() - c.length()) > n || !w.has_suffix(c)) continue;
      out(static_cast<Eigen::Index>(rank(prefix_of(w, w.length() - c.length())))) += std::conj(ac) * hw;
    }
  }
  return out;
}

class HpdSolver {
 public:
  HpdSolver(const SpMat& h, const SolveOptions& opts) : h_(h) {
    use_cg_ = opts.solver == LinearSolver::ConjugateGradient;
    if (!use_cg_) {
      llt_.compute(h_);
      if (llt_.info() != Eigen::Success) {
        if (opts.solver == LinearSolver::Cholesky) throw std::runtime_error("sparse Cholesky factorization failed");
        use_cg_ = true;
      }
    }
    if (use_cg_) {
      cg_.setTolerance(opts.cg_tolerance);
      cg_.setMaxIterations(opts.cg_max_iterations);
      cg_.compute(h_);
    }
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
    if (rhs.size() == 0) return rhs;
    if (!use_cg_) return llt_.solve(rhs);
    Eigen::VectorXcd x = cg_.solve(rhs);
    return x;
  }

  bool used_cg() const noexcept { return use_cg_; }

 private:
  const SpMat& h_;
  bool use_cg_ = false;
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg_;
};

int domain_degree(const MultiplicationOperator& t, int n) {
  const int nq = n - std::max(t.denominator.degree(), 0);
  if (nq < 0) {
    throw std::invalid_argument("degree " + std::to_string(n) + " is below the denominator degree " +
                                std::to_string(t.denominator.degree()));
  }
  return nq;
}

SpMat graph_gram(const MultiplicationOperator& t, int nq) {
  SpMat h = right_mult_gram(t.denominator, nq);
  h += right_mult_gram(t.numerator, nq);
  return h;
}

// sum over |w| <= top - |u| of conj(x_{uw}) x_w, x dense over words of length <= top.
cplx shifted_dot(const Eigen::VectorXcd& x, const GradedIndex& idx, int ulen, std::uint64_t ulex) {
  cplx s{};
  for (int len = 0; len + ulen <= idx.n; ++len) {
    const auto count = static_cast<Eigen::Index>(idx.power[static_cast<std::size_t>(len)]);
    const Eigen::Index shifted = idx.at(len + ulen, ulex * idx.power[static_cast<std::size_t>(len)]);
    s += x.segment(shifted, count).dot(x.segment(idx.at(len, 0), count));
  }
  return s;
}

void fix_phase(Series& a, Series& b) {
  const cplx a0 = a.coeff(Word(a.alphabet()));
  if (a0 == cplx{}) return;
  const cplx phase = std::conj(a0) / std::abs(a0);
  a *= phase;
  b *= phase;
  a.set(Word(a.alphabet()), std::abs(a0));
}

}  // namespace

MultiplicationOperator MultiplicationOperator::polynomial(Series f) {
  const int d = f.alphabet();
  return MultiplicationOperator{Series::constant(d, 1.0), std::move(f), false};
}

MultiplicationOperator MultiplicationOperator::rational_symbol(Series a_den, Series b_num) {
  if (a_den.alphabet() != b_num.alphabet()) throw std::invalid_argument("alphabet mismatch in rational symbol");
  if (a_den.coeff(Word(a_den.alphabet())) == cplx{}) {
    throw std::domain_error("non-invertible constant term in the symbol denominator");
  }
  return MultiplicationOperator{std::move(a_den), std::move(b_num), true};
}

int MultiplicationOperator::degree() const noexcept {
  return std::max({denominator.degree(), numerator.degree(), 0});
}

Series MultiplicationOperator::expanded(int n) const {
  if (!rational) return numerator.truncated(n);
  return solve_left(denominator, numerator, n);
}

Eigen::MatrixXcd MultiplicationOperator::value_at(const MatrixPoint& z) const {
  const Eigen::MatrixXcd num = eval(numerator, z);
  if (!rational) return num;
  return eval(denominator, z).partialPivLu().solve(num);
}

MultiplicationOperator conjugate_by_transpose(const MultiplicationOperator& t) {
  return MultiplicationOperator{transpose_unitary(t.denominator), transpose_unitary(t.numerator), t.rational};
}

Eigen::MatrixXcd right_mult_matrix(const Series& f, int n, std::optional<int> out_degree) {
  if (n < 0) throw std::invalid_argument("negative degree");
  const int out = out_degree.value_or(n + std::max(f.degree(), 0));
  const int d = f.alphabet();
  const std::vector<Word> cols = enumerate_words(d, n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(count_words(d, out)),
                                              static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (const auto& [w, c] : f.terms()) {
      if (static_cast<int>(cols[j].length() + w.length()) > out) break;
      m(static_cast<Eigen::Index>(rank(concat(cols[j], w))), static_cast<Eigen::Index>(j)) += c;
    }
  }
  return m;
}

Eigen::MatrixXcd right_mult_matrix(const MultiplicationOperator& t, int n) {
  if (!t.rational) return right_mult_matrix(t.numerator, n);
  const int e = n + std::max(t.numerator.degree(), 0) + 4;
  return right_mult_matrix(t.expanded(e), n, n + e);
}

SpMat right_mult_gram(const Series& f, int n) {
  const int d = f.alphabet();
  const GradedIndex idx(d, n);
  // c(u) = sum_v conj(f_{uv}) f_v  (= <e_w f, e_{wu} f> for every w)
  std::map<Word, cplx, GradedLess> shift;
  for (const auto& [g, fg] : f.terms()) {
    for (const auto& [v, fv] : f.terms()) {
      if (v.length() > g.length()) break;
      if (g.has_suffix(v)) shift[prefix_of(g, g.length() - v.length())] += std::conj(fg) * fv;
    }
  }
  std::vector<Eigen::Triplet<cplx>> trips;
  for (const auto& [u, c] : shift) {
    if (c == cplx{}) continue;
    const int ulen = static_cast<int>(u.length());
    const std::uint64_t ulex = lex_index(u);
    for (int len = 0; len + ulen <= n; ++len) {
      const std::uint64_t count = idx.power[static_cast<std::size_t>(len)];
      for (std::uint64_t lex = 0; lex < count; ++lex) {
        const Eigen::Index i = idx.at(len, lex);
        if (ulen == 0) {
          trips.emplace_back(i, i, c);
          continue;
        }
        const Eigen::Index j = idx.at(len + ulen, lex * idx.power[static_cast<std::size_t>(ulen)] + ulex);
        trips.emplace_back(i, j, c);
        trips.emplace_back(j, i, std::conj(c));
      }
    }
  }
  SpMat h(idx.size(), idx.size());
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

VnSolution vn_solve(const MultiplicationOperator& t, const Series& h, int n, const SolveOptions& opts) {
  if (h.alphabet() != t.alphabet()) throw std::invalid_argument("alphabet mismatch in vn_solve");
  if (h.degree() > n) throw std::invalid_argument("vn_solve: deg h exceeds the truncation degree");
  const int nq = domain_degree(t, n);
  const SpMat gram = graph_gram(t, nq);
  const Eigen::VectorXcd rhs = adjoint_right_mult(t.denominator, h, nq);
  HpdSolver solver(gram, opts);
  const Eigen::VectorXcd q = solver.solve(rhs);

  VnSolution out{Series(t.alphabet()), Series(t.alphabet())};
  const double rhs_norm = rhs.norm();
  out.normal_residual = (gram * q - rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
  out.unknowns = gram.rows();
  out.used_cg = solver.used_cg();
  const Series qs = from_dense(t.alphabet(), q, nq);
  out.g = multiply(qs, t.denominator, n);
  out.tg = multiply(qs, t.numerator, nq + std::max(t.numerator.degree(), 0));
  return out;
}

cplx wandering_inner(const SeriesColumn& theta, const Word& w) {
  const int top = std::max({theta.top.degree(), theta.bottom.degree(), 0});
  const GradedIndex idx(theta.alphabet(), top);
  if (static_cast<int>(w.length()) > top) return cplx{};
  const std::uint64_t ulex = lex_index(w);
  const int ulen = static_cast<int>(w.length());
  return shifted_dot(to_dense(theta.top, top), idx, ulen, ulex) +
         shifted_dot(to_dense(theta.bottom, top), idx, ulen, ulex);
}

double wandering_residual(const SeriesColumn& theta, int max_len) {
  const int top = std::max({theta.top.degree(), theta.bottom.degree(), 0});
  const GradedIndex idx(theta.alphabet(), top);
  const Eigen::VectorXcd x = to_dense(theta.top, top);
  const Eigen::VectorXcd y = to_dense(theta.bottom, top);
  double worst = 0.0;
  for (int len = 1; len <= std::min(max_len, top); ++len) {
    for (std::uint64_t lex = 0; lex < idx.power[static_cast<std::size_t>(len)]; ++lex) {
      worst = std::max(worst, std::abs(shifted_dot(x, idx, len, lex) + shifted_dot(y, idx, len, lex)));
    }
  }
  return worst;
}

InnerOuterPair inner_outer(const MultiplicationOperator& t, int n, const InnerOuterOptions& opts) {
  if (n < 0 || opts.margin < 0) throw std::invalid_argument("negative degree or margin");
  const int work = n + opts.margin;
  const VnSolution sol = vn_solve(t, Series::constant(t.alphabet(), 1.0), work, opts.solve);
  const cplx g0 = sol.g.coeff(Word(t.alphabet()));
  if (std::abs(g0) == 0.0) throw std::runtime_error("<Delta^{-1} 1, 1> vanished; 1 is orthogonal to the domain");

  InnerOuterPair pair{sol.g, sol.tg};
  pair.normalizer = std::sqrt(std::abs(g0));
  pair.a *= 1.0 / pair.normalizer;
  pair.b *= 1.0 / pair.normalizer;
  fix_phase(pair.a, pair.b);
  pair.a.set_max_degree(work);
  pair.b.set_max_degree(std::max(work, sol.tg.max_degree()));
  pair.degree = n;
  pair.work_degree = work;
  pair.normal_residual = sol.normal_residual;
  pair.column_norm_residual = std::abs(pair.a.norm_squared() + pair.b.norm_squared() - 1.0);
  pair.wandering_residual = wandering_residual(SeriesColumn(pair.a, pair.b), n - t.degree());
  return pair;
}

WanderingSpace wandering_space(const MultiplicationOperator& t, int n, double tol, const SolveOptions& opts) {
  if (n < 1 + t.degree()) {
    throw std::invalid_argument("wandering_space needs N >= 1 + deg f (N = " + std::to_string(n) +
                                ", deg f = " + std::to_string(t.degree()) + ")");
  }
  const int nq = domain_degree(t, n);
  const SpMat gram = graph_gram(t, nq);
  const Eigen::Index size = gram.rows();

  // Generators of G_N are e_q * (a, b); those with |q| >= 1 span the image of
  // G_{N-1} under L (x) I_2. Project the q = empty generator off that span.
  const SpMat rest = gram.bottomRightCorner(size - 1, size - 1);
  const Eigen::VectorXcd cross = gram.col(0).tail(size - 1);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(size - 1);
  if (size > 1) {
    HpdSolver solver(rest, opts);
    c = solver.solve(cross);
  }
  Eigen::VectorXcd q = Eigen::VectorXcd::Zero(size);
  q(0) = 1.0;
  q.tail(size - 1) = -c;

  const Series qs = from_dense(t.alphabet(), q, nq);
  Series top = multiply(qs, t.denominator, n);
  Series bottom = multiply(qs, t.numerator, nq + std::max(t.numerator.degree(), 0));
  const double gen_norm = std::sqrt(std::abs(gram.coeff(0, 0)));
  const double sigma = SeriesColumn(top, bottom).norm();

  WanderingSpace out;
  out.singular_values.push_back(gen_norm > 0.0 ? sigma / gen_norm : 0.0);
  if (out.singular_values.front() > tol) {
    out.dim = 1;
    top *= 1.0 / sigma;
    bottom *= 1.0 / sigma;
    fix_phase(top, bottom);
    out.basis.emplace_back(std::move(top), std::move(bottom));
  }
  return out;
}

OuterDiagnostics is_outer(const Series& a, int n, const std::vector<MatrixPoint>& points) {
  OuterDiagnostics out;
  const Word unit(a.alphabet());
  out.constant_term = a.coeff(unit);
  for (const auto& z : points) {
    if (!inside_ball(z)) throw std::domain_error("outer-check sample point outside open NC ball");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval(a, z));
    const double s = svd.singularValues().minCoeff();
    out.min_singular = out.min_singular ? std::min(*out.min_singular, s) : s;
  }
  if (out.constant_term == cplx{}) {
    out.range_distance = 1.0;  // every q * a lies in ran L
    return out;
  }
  const SpMat gram = right_mult_gram(a, n);
  const Eigen::VectorXcd rhs = adjoint_right_mult(a, Series::constant(a.alphabet(), 1.0), n);
  HpdSolver solver(gram, {});
  const Series q = from_dense(a.alphabet(), solver.solve(rhs), n);
  const Series residual = Series::constant(a.alphabet(), 1.0) - multiply(q, a, n + std::max(a.degree(), 0));
  out.range_distance = residual.norm();
  return out;
}

LocalityReport is_local(const Series& domain_generator, int n, double tol) {
  const Series& a = domain_generator;
  if (a.is_zero()) throw std::invalid_argument("zero domain generator");
  const int nq = n - std::max(a.degree(), 0);
  if (nq < 0) throw std::invalid_argument("degree below the domain generator degree");
  const int d = a.alphabet();
  const SpMat gram = right_mult_gram(a, nq);
  HpdSolver solver(gram, {});
  const bool unit_constant = a.coeff(Word(d)) != cplx{};

  LocalityReport report;
  for (const Word& u : enumerate_words(d, nq)) {
    // With a_0 != 0 the intersection with ran L is spanned by e_u * a, |u| >= 1.
    if (unit_constant && u.empty()) continue;
    const Series x = apply_word(a, u, Side::Left);
    const double xnorm = x.norm();
    for (int k = 1; k <= d; ++k) {
      const Series y = apply_creation_adjoint(x, k, Side::Left);
      ++report.checked;
      if (y.is_zero()) continue;
      const Series q = from_dense(d, solver.solve(adjoint_right_mult(a, y, nq)), nq);
      const double r = (y - multiply(q, a, n)).norm() / xnorm;
      report.max_residual = std::max(report.max_residual, r);
    }
  }
  report.local = report.max_residual <= tol;
  return report;
}

LocalityReport is_local(const MultiplicationOperator& t, int n, double tol) {
  return is_local(t.denominator, n, tol);
}

DivergenceReport divergence_witness(const MultiplicationOperator& h, const Series& f, int nmax) {
  if (f.is_zero()) throw std::invalid_argument("divergence witness needs f != 0");
  if (f.alphabet() != h.alphabet()) throw std::invalid_argument("alphabet mismatch in divergence witness");
  const int start = std::max(f.degree(), 0);
  if (nmax < start) throw std::invalid_argument("Nmax below deg f");
  const Series hs = h.expanded(nmax);
  const Series left = multiply(hs, f, nmax);
  const Series right = multiply(f, hs, nmax);

  auto by_degree = [nmax](const Series& s) {
    std::vector<double> acc(static_cast<std::size_t>(nmax) + 1, 0.0);
    for (const auto& [w, c] : s.terms()) acc[w.length()] += std::norm(c);
    for (std::size_t k = 1; k < acc.size(); ++k) acc[k] += acc[k - 1];
    return acc;
  };
  const std::vector<double> l2 = by_degree(left);
  const std::vector<double> r2 = by_degree(right);
  DivergenceReport out;
  for (int k = start; k <= nmax; ++k) {
    out.degrees.push_back(k);
    out.left_norms.push_back(std::sqrt(l2[static_cast<std::size_t>(k)]));
    out.right_norms.push_back(std::sqrt(r2[static_cast<std::size_t>(k)]));
  }
  return out;
}

}  // namespace freehardy
