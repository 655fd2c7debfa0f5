#pragma once

#include <vector>

#include <Eigen/Dense>

#include "freehardy/series.hpp"

namespace freehardy {

/// A d-tuple of n x n complex matrices (Z_1, ..., Z_d).
///
/// Construction does not require the tuple to be a strict row contraction;
/// operations that need a point of the open NC unit ball check it themselves.
struct MatrixPoint {
  int d;
  int n;
  std::vector<Eigen::MatrixXcd> mats;

  MatrixPoint(int d, int n);  // the zero point
  explicit MatrixPoint(std::vector<Eigen::MatrixXcd> mats);

  const Eigen::MatrixXcd& operator[](int j) const { return mats[static_cast<std::size_t>(j)]; }
  static MatrixPoint scalar(std::vector<cplx> z);
};

/// Largest singular value of the row [Z_1 ... Z_d], i.e. ||sum Z_j Z_j^*||^{1/2}.
double row_norm(const MatrixPoint& z);
bool inside_ball(const MatrixPoint& z);

MatrixPoint direct_sum(const MatrixPoint& z, const MatrixPoint& w);
/// Tuple-wise similarity S^{-1} Z S.
MatrixPoint similarity(const MatrixPoint& z, const Eigen::MatrixXcd& s);
MatrixPoint scaled(const MatrixPoint& z, double r);

/// f(Z) = sum_a Z^a f_a with Z^a = Z_{a1} ... Z_{ak}. Defined for every
/// point since f is finitely supported.
Eigen::MatrixXcd eval(const Series& f, const MatrixPoint& z);

/// Solver for the NC Szego kernel K(Z,W)[P] = sum_a Z^a P (W^a)^*.
///
/// K is the unique solution of K = P + sum_j Z_j K W_j^*. Small problems
/// use an LU factorization of I - sum_j conj(W_j) (x) Z_j (column-major vec);
/// above `direct_limit` unknowns the fixed point is iterated instead.
class SzegoKernel {
 public:
  struct Options {
    int direct_limit = 64;  // n*m above which the Picard iteration is used
    double iteration_tol = 1e-15;
    int max_iterations = 100000;
  };

  SzegoKernel(const MatrixPoint& z, const MatrixPoint& w);
  SzegoKernel(const MatrixPoint& z, const MatrixPoint& w, Options opts);

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& p) const;
  bool uses_direct_solve() const noexcept { return direct_; }

 private:
  MatrixPoint z_;
  MatrixPoint w_;
  Options opts_;
  bool direct_ = true;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

Eigen::MatrixXcd szego_apply(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p);
Eigen::MatrixXcd szego_apply(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p,
                             SzegoKernel::Options opts);
/// sum over |a| <= n of Z^a P (W^a)^*.
Eigen::MatrixXcd szego_truncated(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p, int n);
/// sum_j Z_j K W_j^*.
Eigen::MatrixXcd kernel_shift(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& k);
/// Frobenius norm of K - P - sum_j Z_j K W_j^*.
double szego_residual(const MatrixPoint& z, const MatrixPoint& w, const Eigen::MatrixXcd& p,
                      const Eigen::MatrixXcd& k);

/// Data (Z, y, v) of the kernel vector K{Z, y, v}.
struct KernelVectorSpec {
  MatrixPoint z;
  Eigen::VectorXcd y;
  Eigen::VectorXcd v;

  KernelVectorSpec(MatrixPoint z, Eigen::VectorXcd y, Eigen::VectorXcd v);
};

/// Coefficients <Z^a v, y> of K{Z, y, v} for |a| <= n, so that
/// <K{Z,y,v}, f> = <y, f(Z) v> for deg f <= n.
Series kernel_vector(const KernelVectorSpec& spec, int n);

/// (M^L_g)^* K{Z,y,v} = K{Z, g(Z)^* y, v};  (M^R_g)^* K{Z,y,v} = K{Z, y, g(Z) v}.
KernelVectorSpec multiplier_adjoint_on_kernel(const KernelVectorSpec& spec, const Series& g, Side side);

inline constexpr double kDefaultNilpotentScale = 0.9;

/// Jointly nilpotent point with K{Z, y, v} = e_w: Z = r * (compressions of
/// L_1..L_d to words of length <= |w|), y = r^{-|w|} e_w, v = e_0.
KernelVectorSpec word_point(const Word& w, double r = kDefaultNilpotentScale);

/// Direct sum of one nilpotent block per non-zero term, with K{Z, y, v} = p.
KernelVectorSpec poly_point(const Series& p, double r = kDefaultNilpotentScale);

/// Certified bound ||f|| r^{n+1} / sqrt(1 - r^2), r = row_norm(Z), on the norm
/// of sum_{|a|>n} Z^a f_a for any tail bounded in l^2 by ||f||.
double tail_bound(const Series& f, const MatrixPoint& z, int n);
double tail_bound(double coeff_norm, double r, int n);

}  // namespace freehardy
