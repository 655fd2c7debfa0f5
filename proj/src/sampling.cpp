#include "freehardy/sampling.hpp"

#include <stdexcept>

namespace freehardy {

double Sampler::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

int Sampler::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

cplx Sampler::gaussian() {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(engine_);
  const double im = normal(engine_);
  return {re, im};
}

Eigen::MatrixXcd Sampler::matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = gaussian();
  }
  return m;
}

Eigen::VectorXcd Sampler::vector(int n) { return matrix(n, 1).col(0); }

MatrixPoint Sampler::point(int d, int n, double radius) {
  std::vector<Eigen::MatrixXcd> mats;
  for (int j = 0; j < d; ++j) mats.push_back(matrix(n, n));
  MatrixPoint z(std::move(mats));
  const double norm = row_norm(z);
  return norm > 0.0 ? scaled(z, radius / norm) : z;
}

Series Sampler::polynomial(int d, int degree) {
  Series f(d);
  for (const Word& w : enumerate_words(d, degree)) f.set(w, gaussian());
  return f;
}

Series Sampler::sparse_polynomial(int d, int degree, int terms) {
  Series f(d);
  for (int t = 0; t < terms; ++t) f.add_to(word(d, uniform_int(0, degree)), gaussian());
  return f;
}

Word Sampler::word(int d, int length) {
  std::vector<int> letters;
  for (int i = 0; i < length; ++i) letters.push_back(uniform_int(1, d));
  return Word(d, std::move(letters));
}

Eigen::MatrixXcd Sampler::conditioned(int n, double kappa) {
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr1(matrix(n, n));
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr2(matrix(n, n));
  const Eigen::MatrixXcd u = qr1.householderQ();
  const Eigen::MatrixXcd v = qr2.householderQ();
  Eigen::VectorXcd s(n);
  for (int i = 0; i < n; ++i) s(i) = uniform(1.0, kappa);
  s(0) = 1.0;
  return u * s.asDiagonal() * v.adjoint();
}

std::vector<MatrixPoint> sample_points(int d, int count, const SampleOptions& opts) {
  if (d < 1) throw std::invalid_argument("alphabet size must be positive");
  if (count < 0) throw std::invalid_argument("negative point count");
  if (opts.max_level < 1) throw std::invalid_argument("max level must be positive");
  if (!(opts.max_radius > 0.0 && opts.max_radius < 1.0)) throw std::invalid_argument("max radius must lie in (0, 1)");
  Sampler rng(opts.seed);
  std::vector<MatrixPoint> points;
  for (int k = 0; k < count; ++k) {
    const int n = rng.uniform_int(1, opts.max_level);
    // (0, max_radius]: flip the half-open interval [0, max_radius).
    const double radius = opts.max_radius - rng.uniform(0.0, opts.max_radius);
    points.push_back(rng.point(d, n, radius));
  }
  if (opts.include_nilpotent) {
    for (int len = 1; len <= 2; ++len) points.push_back(word_point(rng.word(d, len), opts.max_radius).z);
  }
  return points;
}

}  // namespace freehardy
