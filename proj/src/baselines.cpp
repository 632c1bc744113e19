#include "dppselect/baselines.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "dppselect/errors.hpp"
#include "dppselect/linalg.hpp"
#include "dppselect/optim.hpp"

namespace dppsel::baselines {

namespace {

Eigen::VectorXd solve_full_rank(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y) {
  const auto k = X.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::MatrixXd& Rf = qr.matrixQR();
  const double lead = std::abs(Rf(0, 0));
  if (lead == 0.0 || std::abs(Rf(k - 1, k - 1)) < linalg::kPivotTol * lead)
    throw RankDeficient("design matrix");
  return qr.solve(y);
}

// Residual quadratic form y'y - y'X (X'X + lambda I)^-1 X'y.
double ridge_residual_quadratic(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y, double lambda,
                                double* half_logdet = nullptr) {
  Eigen::MatrixXd A = X.transpose() * X;
  A.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (half_logdet) *half_logdet = 0.5 * ldlt.vectorD().array().log().sum();
  const Eigen::VectorXd xty = X.transpose() * y;
  const double q = y.squaredNorm() - xty.dot(ldlt.solve(xty));
  return std::max(q, 0.0);
}

}  // namespace

LinearFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool center) {
  LinearFit fit;
  if (center) {
    const Eigen::RowVectorXd xmean = X.colwise().mean();
    const double ymean = y.mean();
    fit.beta = solve_full_rank(X.rowwise() - xmean,
                               (y.array() - ymean).matrix());
    fit.intercept = ymean - xmean * fit.beta;
  } else {
    fit.beta = solve_full_rank(X, y);
  }
  return fit;
}

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            double lambda) {
  Eigen::MatrixXd A = X.transpose() * X;
  A.diagonal().array() += lambda;
  return Eigen::LDLT<Eigen::MatrixXd>(A).solve(X.transpose() * y);
}

double ridge_evidence(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      double lambda, double sigma2) {
  if (!(lambda > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "lambda must be positive");
  if (!(sigma2 > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "sigma2 must be positive");
  const auto n = y.size();
  const auto p = X.cols();
  double half_logdet = 0.0;
  const double q = ridge_residual_quadratic(X, y, lambda, &half_logdet);
  return 0.5 * p * std::log(lambda) - half_logdet -
         0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) -
         q / (2.0 * sigma2);
}

RidgeFit fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::optional<double> sigma2, bool center) {
  Eigen::MatrixXd Xe = X;
  Eigen::VectorXd ye = y;
  Eigen::RowVectorXd xmean = Eigen::RowVectorXd::Zero(X.cols());
  double ymean = 0.0;
  if (center) {
    xmean = X.colwise().mean();
    ymean = y.mean();
    Xe.rowwise() -= xmean;
    ye.array() -= ymean;
  }
  const auto n = ye.size();
  const auto evidence_at = [&](double log_lambda) {
    const double lambda = std::exp(log_lambda);
    double s2;
    if (sigma2) {
      s2 = *sigma2;
    } else {
      s2 = std::max(ridge_residual_quadratic(Xe, ye, lambda) /
                        static_cast<double>(n),
                    1e-300);
    }
    return ridge_evidence(Xe, ye, lambda, s2);
  };
  const double log_lambda = golden_section_max(evidence_at, -12.0, 12.0, 1e-9);

  RidgeFit fit;
  fit.lambda = std::exp(log_lambda);
  fit.log_evidence = evidence_at(log_lambda);
  fit.sigma2 = sigma2 ? *sigma2
                      : std::max(ridge_residual_quadratic(Xe, ye, fit.lambda) /
                                     static_cast<double>(n),
                                 1e-300);
  fit.beta = ridge_solve(Xe, ye, fit.lambda);
  if (center) fit.intercept = ymean - xmean * fit.beta;
  return fit;
}

Eigen::VectorXd oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const SubsetMask& support) {
  if (support.dim() != X.cols())
    throw DimensionMismatch("support dimension does not match design");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  if (support.empty()) return beta;
  const std::vector<int> active = support.indices();
  Eigen::MatrixXd Xa(X.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c)
    Xa.col(static_cast<Eigen::Index>(c)) = X.col(active[c]);
  const Eigen::VectorXd beta_a = solve_full_rank(Xa, y);
  for (std::size_t c = 0; c < active.size(); ++c)
    beta[active[c]] = beta_a[static_cast<Eigen::Index>(c)];
  return beta;
}

}  // namespace dppsel::baselines
