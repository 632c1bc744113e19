#pragma once

#include <Eigen/Core>
#include <optional>

#include "dppselect/mask.hpp"

namespace dppsel::baselines {

struct LinearFit {
  Eigen::VectorXd beta;
  double intercept = 0.0;
};

struct RidgeFit {
  double lambda = 1.0;
  Eigen::VectorXd beta;
  double log_evidence = 0.0;
  double intercept = 0.0;
  double sigma2 = 1.0;
};

// Least squares. With center = true, X and y are centered first and the
// intercept is reported separately.
LinearFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              bool center = false);

// Ridge coefficients at a fixed penalty: (X'X + lambda I) beta = X'y.
Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            double lambda);

// Log marginal density of y with a N(0, sigma2/lambda I) coefficient prior.
// All lambda-independent constants are included so values are comparable
// across lambda.
double ridge_evidence(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      double lambda, double sigma2);

// Empirical-Bayes ridge: golden-section search of the evidence over
// log lambda in [-12, 12]. sigma2 absent means it is profiled analytically;
// center = true estimates an intercept by centering.
RidgeFit fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::optional<double> sigma2 = std::nullopt,
                   bool center = false);

// Least squares restricted to the true support, zeros elsewhere.
Eigen::VectorXd oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const SubsetMask& support);

}  // namespace dppsel::baselines
