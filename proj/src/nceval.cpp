#include "freehardy/nceval.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace freehardy {

namespace {

void require_inside(const MatrixPoint& z) {
  const double r = row_norm(z);
  if (!(r < 1.0)) throw std::domain_error("point outside open NC ball (row norm " + std::to_string(r) + ")");
}

void require_alphabet(int series_d, int point_d) {
  if (series_d != point_d) {
    throw std::invalid_argument("dimension mismatch: series over " + std::to_string(series_d) +
                                " letters, point with " + std::to_string(point_d) + " matrices");
  }
}

// Z_k stored sparse when that is clearly cheaper (the nilpotent points are
// mostly zeros).
struct LetterAction {
  bool sparse = false;
  Eigen::MatrixXcd dense;
  Eigen::SparseMatrix<cplx> sp;

  explicit LetterAction(const Eigen::MatrixXcd& m) {
    const Eigen::Index nnz = (m.array() != cplx{}).count();
    if (m.size() > 64 && nnz * 4 < m.size()) {
      sparse = true;
      sp = m.sparseView();
    } else {
      dense = m;
    }
  }

  Eigen::MatrixXcd operator*(const Eigen::MatrixXcd& x) const {
    if (sparse) return sp * x;
    return dense * x;
  }
};

}  // namespace

MatrixPoint::MatrixPoint(int d_, int n_) : d(d_), n(n_) {
  if (d < 1 || n < 1) throw std::invalid_argument("matrix point needs d >= 1 and n >= 1");
  mats.assign(static_cast<std::size_t>(d), Eigen::MatrixXcd::Zero(n, n));
}

MatrixPoint::MatrixPoint(std::vector<Eigen::MatrixXcd> m) : d(static_cast<int>(m.size())), n(0), mats(std::move(m)) {
  if (mats.empty()) throw std::invalid_argument("matrix point needs at least one matrix");
  n = static_cast<int>(mats.front().rows());
  if (n < 1) throw std::invalid_argument("matrix point needs n >= 1");
  for (const auto& z : mats) {
    if (z.rows() != n || z.cols() != n) throw std::invalid_argument("matrix point entries must all be n x n");
  }
}

MatrixPoint MatrixPoint::scalar(std::vector<cplx> z) {
  std::vector<Eigen::MatrixXcd> mats;
  for (cplx c : z) mats.push_back(Eigen::MatrixXcd::Constant(1, 1, c));
  return MatrixPoint(std::move(mats));
}

double row_norm(const MatrixPoint& z) {
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(z.n, z.n);
  for (const auto& m : z.mats) gram.noalias() += m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool inside_ball(const MatrixPoint& z) { return row_norm(z) < 1.0; }

MatrixPoint direct_sum(const MatrixPoint& z, const MatrixPoint& w) {
  if (z.d != w.d) throw std::invalid_argument("direct sum of points with different d");
  std::vector<Eigen::MatrixXcd> mats;
  for (int j = 0; j < z.d; ++j) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(z.n + w.n, z.n + w.n);
    m.topLeftCorner(z.n, z.n) = z[j];
    m.bottomRightCorner(w.n, w.n) = w[j];
    mats.push_back(std::move(m));
  }
  return MatrixPoint(std::move(mats));
}

MatrixPoint similarity(const MatrixPoint& z, const Eigen::MatrixXcd& s) {
  const Eigen::MatrixXcd sinv = s.inverse();
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& m : z.mats) mats.push_back(sinv * m * s);
  return MatrixPoint(std::move(mats));
}

MatrixPoint scaled(const MatrixPoint& z, double r) {
  MatrixPoint out(z);
  for (auto& m : out.mats) m *= r;
  return out;
}

Eigen::MatrixXcd eval(const Series& f, const MatrixPoint& z) {
  require_alphabet(f.alphabet(), z.d);
  Eigen::MatrixXcd value = Eigen::MatrixXcd::Zero(z.n, z.n);
  // Z^w for every prefix reached so far; terms arrive shortest first.
  std::map<Word, Eigen::MatrixXcd, GradedLess> powers;
  powers.emplace(Word(z.d), Eigen::MatrixXcd::Identity(z.n, z.n));
  auto power = [&](const Word& w, auto&& self) -> const Eigen::MatrixXcd& {
    auto it = powers.find(w);
    if (it != powers.end()) return it->second;
    const Eigen::MatrixXcd& prefix = self(w.init(), self);
    Eigen::MatrixXcd p = prefix * z[w[w.length() - 1] - 1];
    return powers.emplace(w, std::move(p)).first->second;
  };
  for (const auto& [w, c] : f.terms()) value += c * power(w, power);
  return value;
}

SzegoKernel::SzegoKernel(const MatrixPoint& z, const MatrixPoint& w) : SzegoKernel(z, w, Options{}) {}

SzegoKernel::SzegoKernel(const MatrixPoint& z, const MatrixPoint& w, Options opts) : z_(z), w_(w), opts_(opts) {
  if (z.d != w.d) throw std::invalid_argument("Szego kernel points with different d");
  require_inside(z);
  require_inside(w);
  const int n = z.n;
  const int m = w.n;
  direct_ = n * m <= opts_.direct_limit;
  if (!direct_) return;
  // vec(Z_j K W_j^*) = (conj(W_j) (x) Z_j) vec(K)
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(n * m, n * m);
  for (int j = 0; j < z.d; ++j) {
    const Eigen::MatrixXcd wc = w[j].conjugate();
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        if (wc(a, b) == cplx{}) continue;
        op.block(a * n, b * n, n, n) -= wc(a, b) * z[j];
      }
    }
  }
  lu_.compute(op);
}

Eigen::MatrixXcd SzegoKernel::apply(const Eigen::MatrixXcd& p) const {
  if (p.rows() != z_.n || p.cols() != w_.n) {
    throw std::invalid_argument("Szego kernel argument must be " + std::to_string(z_.n) + " x " +
                                std::to_string(w_.n));
  }
  if (direct_) {
    const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(p.data(), p.size());
    Eigen::VectorXcd sol = lu_.solve(rhs);
    return Eigen::Map<Eigen::MatrixXcd>(sol.data(), z_.n, w_.n);
  }
  Eigen::MatrixXcd k = p;
  for (int it = 0; it < opts_.max_iterations; ++it) {
    Eigen::MatrixXcd next = p + kernel_shift(z_, w_, k);
    const double step = (next - k).norm();
    k = std::move(next);
    if (step <= opts_.iteration_tol * std::max(1.0, k.norm())) return k;
  }
  throw std::runtime_error("Szego fixed-point iteration did not converge");
}

Eigen::MatrixXcd szego_apply(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p) {
  return SzegoKernel(z, w).apply(p);
}

Eigen::MatrixXcd szego_apply(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p,
                             SzegoKernel::Options opts) {
  return SzegoKernel(z, w, opts).apply(p);
}

Eigen::MatrixXcd kernel_shift(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& k) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(z.n, w.n);
  for (int j = 0; j < z.d; ++j) out.noalias() += z[j] * k * w[j].adjoint();
  return out;
}

Eigen::MatrixXcd szego_truncated(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p, int n) {
  if (z.d != w.d) throw std::invalid_argument("Szego kernel points with different d");
  if (p.rows() != z.n || p.cols() != w.n) throw std::invalid_argument("Szego kernel argument has wrong shape");
  // The words of length k contribute the k-th iterate of X -> sum_j Z_j X W_j^*.
  Eigen::MatrixXcd level = p;
  Eigen::MatrixXcd sum = p;
  for (int k = 1; k <= n; ++k) {
    level = kernel_shift(z, w, level);
    sum += level;
  }
  return sum;
}

double szego_residual(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p,
                      const Eigen::MatrixXcd& k) {
  return (k - p - kernel_shift(z, w, k)).norm();
}

KernelVectorSpec::KernelVectorSpec(MatrixPoint z_, Eigen::VectorXcd y_, Eigen::VectorXcd v_)
    : z(std::move(z_)), y(std::move(y_)), v(std::move(v_)) {
  if (y.size() != z.n || v.size() != z.n) {
    throw std::invalid_argument("kernel vector data: y and v must have length " + std::to_string(z.n));
  }
}

Series kernel_vector(const KernelVectorSpec& spec, int n) {
  if (n < 0) throw std::invalid_argument("negative degree");
  const MatrixPoint& z = spec.z;
  const int d = z.d;
  std::vector<LetterAction> letters;
  for (const auto& m : z.mats) letters.emplace_back(m);

  Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(count_words(d, n)));
  // Columns of `level` are Z^a v for the words a of one length, in lex order;
  // Z^{ka} v = Z_k (Z^a v) fills block k of the next level.
  Eigen::MatrixXcd level = spec.v;
  Eigen::Index offset = 0;
  for (int len = 0;; ++len) {
    coeffs.segment(offset, level.cols()) = level.adjoint() * spec.y;
    offset += level.cols();
    if (len == n) break;
    Eigen::MatrixXcd next(z.n, level.cols() * d);
    for (int k = 0; k < d; ++k) next.middleCols(k * level.cols(), level.cols()) = letters[static_cast<std::size_t>(k)] * level;
    level = std::move(next);
  }
  return from_dense(d, coeffs, n);
}

KernelVectorSpec multiplier_adjoint_on_kernel(const KernelVectorSpec& spec, const Series& g, Side side) {
  const Eigen::MatrixXcd gz = eval(g, spec.z);
  if (side == Side::Left) return KernelVectorSpec(spec.z, gz.adjoint() * spec.y, spec.v);
  return KernelVectorSpec(spec.z, spec.y, gz * spec.v);
}

KernelVectorSpec word_point(const Word& w, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("nilpotent scale r must lie in (0,1)");
  const int d = w.alphabet();
  const int len = static_cast<int>(w.length());
  const auto dim = static_cast<Eigen::Index>(count_words(d, len));
  const std::vector<Word> words = enumerate_words(d, len);
  std::vector<Eigen::MatrixXcd> mats(static_cast<std::size_t>(d), Eigen::MatrixXcd::Zero(dim, dim));
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Word& b = words[static_cast<std::size_t>(col)];
    if (static_cast<int>(b.length()) >= len) continue;
    for (int k = 1; k <= d; ++k) {
      const auto row = static_cast<Eigen::Index>(rank(concat(Word(d, {k}), b)));
      mats[static_cast<std::size_t>(k - 1)](row, col) = r;
    }
  }
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(dim);
  y(static_cast<Eigen::Index>(rank(w))) = std::pow(r, -len);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(0) = 1.0;
  return KernelVectorSpec(MatrixPoint(std::move(mats)), std::move(y), std::move(v));
}

KernelVectorSpec poly_point(const Series& p, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("nilpotent scale r must lie in (0,1)");
  if (p.is_zero()) throw std::invalid_argument("empty direct sum: the zero polynomial has no blocks");
  const int d = p.alphabet();
  Eigen::Index total = 0;
  for (const auto& [w, c] : p.terms()) total += static_cast<Eigen::Index>(w.length()) + 1;

  std::vector<Eigen::MatrixXcd> mats(static_cast<std::size_t>(d), Eigen::MatrixXcd::Zero(total, total));
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(total);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(total);
  Eigen::Index base = 0;
  for (const auto& [w, c] : p.terms()) {
    const auto len = static_cast<Eigen::Index>(w.length());
    // Block for w on C^{len+1}: Z_j sends e_{i+1} to r e_i when the i-th
    // letter of w is j, so Z^w e_{len+1} = r^len e_1 and Z^u e_{len+1} has no
    // e_1 component for every other word u.
    for (Eigen::Index i = 0; i < len; ++i) {
      mats[static_cast<std::size_t>(w[static_cast<std::size_t>(i)] - 1)](base + i, base + i + 1) = r;
    }
    const double mag = std::sqrt(std::abs(c));
    y(base) = std::pow(r, -static_cast<double>(len)) * (c / mag);
    v(base + len) = mag;
    base += len + 1;
  }
  return KernelVectorSpec(MatrixPoint(std::move(mats)), std::move(y), std::move(v));
}

double tail_bound(double coeff_norm, double r, int n) {
  if (!(r < 1.0)) throw std::domain_error("tail bound needs row norm < 1");
  if (r == 0.0) return 0.0;
  return coeff_norm * std::pow(r, n + 1) / std::sqrt(1.0 - r * r);
}

double tail_bound(const Series& f, const MatrixPoint& z, int n) {
  require_alphabet(f.alphabet(), z.d);
  return tail_bound(f.norm(), row_norm(z), n);
}

}  // namespace freehardy
