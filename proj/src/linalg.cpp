#include "dppselect/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dppselect/errors.hpp"

namespace dppsel::linalg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of log pivots of a symmetric PSD matrix, or -inf if any pivot falls
// below kPivotTol relative to the largest (or below an absolute floor).
double log_det_psd(const Eigen::MatrixXd& A) {
  const auto k = A.rows();
  if (k == 0) return 0.0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0)) return -kInf;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (d[i] < kPivotTol * dmax || d[i] < 1e-300) return -kInf;
    logdet += std::log(d[i]);
  }
  return logdet;
}

Eigen::MatrixXd extract_principal(const Eigen::MatrixXd& L,
                                  const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      sub(i, j) = L(idx[static_cast<std::size_t>(i)],
                    idx[static_cast<std::size_t>(j)]);
  return sub;
}

}  // namespace

StandardizedDesign standardize(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  const auto p = X.cols();
  StandardizedDesign out;
  out.values.resize(n, p);
  out.column_means.resize(p);
  out.column_scales.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double m = X.col(j).mean();
    const Eigen::VectorXd centered = X.col(j).array() - m;
    const double s = centered.norm();
    if (s == 0.0) throw ConstantColumn(static_cast<int>(j));
    out.column_means[j] = m;
    out.column_scales[j] = s;
    out.values.col(j) = centered / s;
  }
  return out;
}

Eigen::MatrixXd correlation_kernel(const StandardizedDesign& xs) {
  Eigen::MatrixXd R = xs.values.transpose() * xs.values;
  R = 0.5 * (R + R.transpose()).eval();
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    for (Eigen::Index j = 0; j < R.cols(); ++j)
      if (i != j) R(i, j) = std::clamp(R(i, j), -1.0, 1.0);
  return R;
}

double log_det_principal_submatrix(const Eigen::MatrixXd& L,
                                   const SubsetMask& mask) {
  if (mask.dim() != L.rows())
    throw DimensionMismatch("mask dimension " + std::to_string(mask.dim()) +
                            " does not match kernel dimension " +
                            std::to_string(L.rows()));
  if (mask.empty()) return 0.0;
  return log_det_psd(extract_principal(L, mask.indices()));
}

double log_det_plus_identity(const Eigen::MatrixXd& L) {
  Eigen::MatrixXd A = L;
  A.diagonal().array() += 1.0;
  return log_det_psd(A);
}

Eigen::MatrixXd fractional_power(const Eigen::MatrixXd& R, double alpha) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam[i] = (lam[i] == 0.0 && alpha == 0.0) ? 1.0 : std::pow(lam[i], alpha);
  Eigen::MatrixXd out =
      eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose()).eval();
}

double projection_ss(const Eigen::MatrixXd& X_active, const Eigen::VectorXd& y) {
  const auto k = X_active.cols();
  if (k == 0) return 0.0;
  if (X_active.rows() != y.size())
    throw DimensionMismatch("design rows do not match response length");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X_active);
  const Eigen::MatrixXd& Rf = qr.matrixQR();
  const double lead = std::abs(Rf(0, 0));
  if (lead == 0.0 || std::abs(Rf(k - 1, k - 1)) < kPivotTol * lead)
    throw RankDeficient("active design submatrix");
  Eigen::VectorXd qty = qr.householderQ().transpose() * y;
  const double ss = qty.head(k).squaredNorm();
  return std::clamp(ss, 0.0, y.squaredNorm());
}

Eigen::VectorXd mahalanobis_distances(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < p + 2)
    throw SingularCovariance("need at least p + 2 rows for a usable covariance");
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0) || d.minCoeff() < kPivotTol * dmax)
    throw SingularCovariance("sample covariance is numerically singular");
  Eigen::VectorXd dist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd v = centered.row(i).transpose();
    dist[i] = std::sqrt(std::max(0.0, v.dot(ldlt.solve(v))));
  }
  return dist;
}

}  // namespace dppsel::linalg
