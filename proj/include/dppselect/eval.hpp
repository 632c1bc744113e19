#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dppselect/dataset.hpp"
#include "dppselect/mask.hpp"
#include "dppselect/rng.hpp"
#include "dppselect/selection.hpp"

namespace dppsel::eval {

enum class Method { eb, dpp, ldpp, gdpp, ridge, ols, oracle };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

// Collinear synthetic design: three independent standard normal columns and
// three pairwise sums contaminated with scaled noise.
struct SyntheticSpec {
  int rows = 400;
  Eigen::VectorXd beta_star = (Eigen::VectorXd(6) << 1, -1, 0, 0, 0, 0).finished();
  double noise_sd = 0.9;
  double collinear_noise_scale = 0.1;
  std::uint64_t seed = 0;
};

Eigen::MatrixXd generate_synthetic(const SyntheticSpec& spec);

// Design plus one simulated response draw; used by the synthetic workflows.
Dataset synthetic_dataset(const SyntheticSpec& spec);

SubsetMask true_support(const SyntheticSpec& spec);

// Loss functions.
double max_loss(const Eigen::VectorXd& beta_star, const Eigen::VectorXd& beta_hat);
double quad_loss(const Eigen::VectorXd& beta_star, const Eigen::VectorXd& beta_hat);
double abs_loss(double y, double y_hat);

struct RiskPoint {
  double mean = 0.0;
  double std_err = 0.0;
};

struct RiskCurve {
  std::vector<int> sample_sizes;                // 20k for k = 1..kMax
  std::vector<Method> methods;
  std::vector<std::vector<RiskPoint>> cells;    // [method][k]
  std::vector<long> failed_fits;                // per method
};

// One design is drawn per study; responses are resampled per repetition with
// the noise level known to every method. Failed fits score +inf and are
// counted.
RiskCurve run_risk_study(const SyntheticSpec& spec,
                         const std::vector<Method>& methods, int k_max,
                         int reps, const selection::FitOptions& fit = {});

// Train/test division by Mahalanobis distance from the predictor mean.
struct SplitSpec {
  int test_pool_size = 10;
  int exclude_furthest = 20;
  int train_sample_size = 20;
  int rounds = 60;
  std::uint64_t seed = 0;
};

struct SplitPools {
  std::vector<int> test_pool;   // the furthest rows
  std::vector<int> train_pool;  // everything but the furthest exclude_furthest
};

SplitPools mahalanobis_split(const Eigen::MatrixXd& X, const SplitSpec& spec);

struct PredictiveStudy {
  std::vector<Method> methods;
  std::vector<std::vector<double>> losses;  // [method][round]; NaN = missing
  std::vector<long> failures;               // per method
};

// Per round: one test row from the test pool, train_sample_size training rows
// from the train pool (without replacement), then each method fits on the
// training draw and predicts the test response. Bayesian methods reduce to a
// preselected support of size preselect_k when p exceeds it. Per-round
// failures are recorded as missing, not fatal.
PredictiveStudy run_predictive_study(const Dataset& data, const SplitSpec& spec,
                                     const std::vector<Method>& methods,
                                     const selection::FitOptions& fit = {},
                                     int preselect_k = 10);

enum class WilcoxonMode { automatic, exact, normal };

// One-sided paired signed-rank test with alternative "A < B". Zero
// differences are dropped, ties receive average ranks. The exact null
// distribution is enumerated when the effective sample size is at most 12
// (and always under mode exact); otherwise a tie-corrected normal
// approximation with 0.5 continuity correction is used.
double wilcoxon_signed_rank(const std::vector<double>& a,
                            const std::vector<double>& b,
                            WilcoxonMode mode = WilcoxonMode::automatic);

}  // namespace dppsel::eval
