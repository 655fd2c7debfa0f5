#include "freehardy/pick.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace freehardy {

namespace {

void check_points(const std::vector<MatrixPoint>& points) {
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].d != points.front().d) throw std::invalid_argument("points with different d");
    if (!inside_ball(points[k])) {
      throw std::domain_error("point " + std::to_string(k) + " outside open NC ball (row norm " +
                              std::to_string(row_norm(points[k])) + ")");
    }
  }
}

void check_values(const std::vector<MatrixPoint>& points, const std::vector<Eigen::MatrixXcd>& values,
                  const char* name) {
  if (values.size() != points.size()) {
    throw std::invalid_argument(std::string("size mismatch: ") + std::to_string(values.size()) + " " + name +
                                " values for " + std::to_string(points.size()) + " points");
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (values[k].rows() != points[k].n || values[k].cols() != points[k].n) {
      throw std::invalid_argument(std::string("size mismatch: ") + name + " value " + std::to_string(k) +
                                  " must be " + std::to_string(points[k].n) + " x " + std::to_string(points[k].n));
    }
  }
}

std::vector<Eigen::Index> block_offsets(const std::vector<MatrixPoint>& points) {
  std::vector<Eigen::Index> off{0};
  for (const auto& z : points) off.push_back(off.back() + static_cast<Eigen::Index>(z.n) * z.n);
  return off;
}

std::vector<GramIndex> gram_labels(const std::vector<MatrixPoint>& points) {
  std::vector<GramIndex> index;
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int a = 0; a < points[k].n; ++a) {
      for (int b = 0; b < points[k].n; ++b) index.push_back({static_cast<int>(k), a, b});
    }
  }
  return index;
}

}  // namespace

PickDatum::PickDatum(MatrixPoint z_, Eigen::MatrixXcd w_) : z(std::move(z_)), w(std::move(w_)) {
  if (w.rows() != z.n || w.cols() != z.n) {
    throw std::invalid_argument("size mismatch: target must be " + std::to_string(z.n) + " x " + std::to_string(z.n));
  }
}

GramMatrix assemble_gram(const std::vector<MatrixPoint>& points, const BlockMap& phi) {
  check_points(points);
  const std::vector<Eigen::Index> off = block_offsets(points);
  GramMatrix g;
  g.index = gram_labels(points);
  g.entries = Eigen::MatrixXcd::Zero(off.back(), off.back());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const int nk = points[k].n;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const int nj = points[j].n;
      const SzegoKernel kernel(points[k], points[j]);
      for (int b = 0; b < nk; ++b) {
        for (int d = 0; d < nj; ++d) {
          Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(nk, nj);
          e(b, d) = 1.0;
          const Eigen::MatrixXcd block = phi(static_cast<int>(k), static_cast<int>(j), kernel, e);
          for (int a = 0; a < nk; ++a) {
            for (int c = 0; c < nj; ++c) g.entries(off[k] + a * nk + b, off[j] + c * nj + d) = block(a, c);
          }
        }
      }
    }
  }
  return g;
}

GramMatrix szego_gram(const std::vector<MatrixPoint>& points, GramMethod method, int n) {
  if (method == GramMethod::Closed) {
    return assemble_gram(points, [](int, int, const SzegoKernel& k, const Eigen::MatrixXcd& p) { return k.apply(p); });
  }
  check_points(points);
  if (n < 0) throw std::invalid_argument("negative truncation degree");
  GramMatrix g;
  g.index = gram_labels(points);
  std::vector<Eigen::VectorXcd> vecs;
  for (const auto& [k, a, b] : g.index) {
    const MatrixPoint& z = points[static_cast<std::size_t>(k)];
    const KernelVectorSpec spec(z, Eigen::VectorXcd::Unit(z.n, a), Eigen::VectorXcd::Unit(z.n, b));
    vecs.push_back(to_dense(kernel_vector(spec, n), n));
  }
  const auto dim = static_cast<Eigen::Index>(vecs.size());
  g.entries.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) g.entries(r, c) = vecs[static_cast<std::size_t>(r)].dot(vecs[static_cast<std::size_t>(c)]);
  }
  return g;
}

Eigen::MatrixXd gram_tail_bound(const std::vector<MatrixPoint>& points, int n) {
  std::vector<double> tails;
  for (const auto& z : points) tails.push_back(tail_bound(1.0, row_norm(z), n));
  const std::vector<GramIndex> index = gram_labels(points);
  const auto dim = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd bound(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      bound(r, c) = tails[static_cast<std::size_t>(index[static_cast<std::size_t>(r)].point)] *
                    tails[static_cast<std::size_t>(index[static_cast<std::size_t>(c)].point)];
    }
  }
  return bound;
}

PsdVerdict psd_verdict(const Eigen::MatrixXcd& g, double tol) {
  PsdVerdict v;
  v.dim = g.rows();
  if (g.rows() == 0) {
    v.feasible = true;
    return v;
  }
  v.hermiticity = (g - g.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  v.min_eig = es.eigenvalues().minCoeff();
  v.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  v.feasible = v.min_eig >= -tol * std::max(1.0, v.norm);
  return v;
}

GramMatrix pick_matrix(const std::vector<PickDatum>& data, Side side) {
  std::vector<MatrixPoint> points;
  for (const auto& datum : data) points.push_back(datum.z);
  auto phi = [&](int k, int j, const SzegoKernel& kernel, const Eigen::MatrixXcd& p) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd& wk = data[static_cast<std::size_t>(k)].w;
    const Eigen::MatrixXcd& wj = data[static_cast<std::size_t>(j)].w;
    const Eigen::MatrixXcd kp = kernel.apply(p);
    if (side == Side::Left) return kp - wk * kp * wj.adjoint();
    return kp - kernel.apply(wk * p * wj.adjoint());
  };
  return assemble_gram(points, phi);
}

PsdVerdict pick_check(const std::vector<PickDatum>& data, Side side, double tol) {
  return psd_verdict(pick_matrix(data, side).entries, tol);
}

GramMatrix leech_matrix(const std::vector<MatrixPoint>& points, const std::vector<Eigen::MatrixXcd>& a_values,
                        const std::vector<Eigen::MatrixXcd>& b_values, Side side) {
  check_values(points, a_values, "A");
  check_values(points, b_values, "B");
  auto phi = [&](int k, int j, const SzegoKernel& kernel, const Eigen::MatrixXcd& p) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd& ak = a_values[static_cast<std::size_t>(k)];
    const Eigen::MatrixXcd& aj = a_values[static_cast<std::size_t>(j)];
    const Eigen::MatrixXcd& bk = b_values[static_cast<std::size_t>(k)];
    const Eigen::MatrixXcd& bj = b_values[static_cast<std::size_t>(j)];
    if (side == Side::Left) {
      const Eigen::MatrixXcd kp = kernel.apply(p);
      return bk * kp * bj.adjoint() - ak * kp * aj.adjoint();
    }
    return kernel.apply(bk * p * bj.adjoint()) - kernel.apply(ak * p * aj.adjoint());
  };
  return assemble_gram(points, phi);
}

PsdVerdict leech_check(const std::vector<MatrixPoint>& points, const std::vector<Eigen::MatrixXcd>& a_values,
                       const std::vector<Eigen::MatrixXcd>& b_values, Side side, double tol) {
  return psd_verdict(leech_matrix(points, a_values, b_values, side).entries, tol);
}

MembershipReport membership_lambda(const Series& f, const std::vector<MatrixPoint>& points) {
  if (points.empty()) throw std::invalid_argument("membership bound needs at least one point");
  const GramMatrix gk = szego_gram(points);
  // G_f = u u^* with u_(k,a,b) = f(Z^k)_ab.
  Eigen::VectorXcd u(static_cast<Eigen::Index>(gk.index.size()));
  std::vector<Eigen::MatrixXcd> values;
  for (const auto& z : points) values.push_back(eval(f, z));
  for (std::size_t r = 0; r < gk.index.size(); ++r) {
    const auto& [k, a, b] = gk.index[r];
    u(static_cast<Eigen::Index>(r)) = values[static_cast<std::size_t>(k)](a, b);
  }
  const Eigen::MatrixXcd gf = u * u.adjoint();

  const Eigen::MatrixXcd h = 0.5 * (gk.entries + gk.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXd mu = es.eigenvalues();
  MembershipReport report;
  const double top = mu.maxCoeff();
  const double bottom = mu.minCoeff();
  report.condition = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
  if (report.condition > 1e12) {
    report.shift = 1e-12;
    mu.array() += report.shift;
  }
  if (!(mu.minCoeff() > 0.0)) {
    throw std::domain_error("ill-conditioned Szego Gram (condition estimate " + std::to_string(report.condition) +
                            ")");
  }
  const Eigen::MatrixXcd inv_sqrt = es.eigenvectors() * mu.cwiseSqrt().cwiseInverse().asDiagonal() *
                                    es.eigenvectors().adjoint();
  const Eigen::MatrixXcd m = inv_sqrt * gf * inv_sqrt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ms(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  report.lambda = std::sqrt(std::max(0.0, ms.eigenvalues().maxCoeff()));
  return report;
}

SmirnovFormReport smirnov_form_check(const Series& f, const Series& a, const Series& b,
                                     const std::vector<MatrixPoint>& points, double tol) {
  std::vector<Eigen::MatrixXcd> values;
  for (const auto& z : points) values.push_back(eval(f, z));
  return smirnov_form_check(values, a, b, points, tol);
}

SmirnovFormReport smirnov_form_check(const std::vector<Eigen::MatrixXcd>& f_values, const Series& a, const Series& b,
                                     const std::vector<MatrixPoint>& points, double tol) {
  if (b.coeff(Word(b.alphabet())) != cplx{}) throw std::domain_error("Smirnov form needs B_0 = 0");
  check_values(points, f_values, "f");
  SmirnovFormReport report;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const MatrixPoint& z = points[k];
    const Eigen::MatrixXcd bz = eval(b, z);
    const Eigen::MatrixXcd lhs = f_values[k] * (Eigen::MatrixXcd::Identity(z.n, z.n) - bz);
    report.max_residual = std::max(report.max_residual, (lhs - eval(a, z)).norm());
    const double bn = Eigen::JacobiSVD<Eigen::MatrixXcd>(bz).singularValues()(0);
    report.max_b_norm = std::max(report.max_b_norm, bn);
    if (!(bn < 1.0)) report.contractive = false;
  }
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace freehardy
