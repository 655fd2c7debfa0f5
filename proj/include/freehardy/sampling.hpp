#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "freehardy/nceval.hpp"

namespace freehardy {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seeded source of complex Gaussian data. Output depends only on the seed.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive
  cplx gaussian();
  Eigen::MatrixXcd matrix(int rows, int cols);
  Eigen::VectorXcd vector(int n);
  /// Random tuple at level n rescaled to row norm exactly `radius`.
  MatrixPoint point(int d, int n, double radius);
  /// Gaussian coefficients on every word of length <= degree.
  Series polynomial(int d, int degree);
  /// `terms` Gaussian coefficients on random words of length <= degree.
  Series sparse_polynomial(int d, int degree, int terms);
  Word word(int d, int length);
  /// Invertible matrix with condition number at most `kappa`.
  Eigen::MatrixXcd conditioned(int n, double kappa);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

struct SampleOptions {
  int max_level = 3;
  double max_radius = 0.7;
  std::uint64_t seed = kDefaultSeed;
  bool include_nilpotent = false;
};

/// `count` random points with level uniform in [1, max_level] and row norm
/// uniform in (0, max_radius]. With include_nilpotent, word points of
/// random words of length 1 and 2 at scale max_radius are appended.
std::vector<MatrixPoint> sample_points(int d, int count, const SampleOptions& opts = {});

}  // namespace freehardy
