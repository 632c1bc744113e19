#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dppselect/dataset.hpp"
#include "dppselect/mask.hpp"
#include "dppselect/priors.hpp"

namespace dppsel::selection {

// Hyperparameters of the g-prior selection model. w/theta/alpha mirror the
// prior family's parameters; sigma2 and mu carry their estimation status.
struct Hyperparams {
  double g = 1.0;
  double w = 0.5;
  std::optional<double> theta;  // LDPP only
  std::optional<double> alpha;  // GDPP only
  double sigma2 = 1.0;
  bool sigma2_estimated = false;
  std::optional<double> mu;  // absent = no-intercept model
};

struct FitOptions {
  int starts = 5;       // multi-start count for the local searches
  int grid = 0;         // prescan grid per axis; 0 = auto (9 if d<=3 else 5)
  double tol = 1e-9;    // objective improvement threshold per sweep
  int max_sweeps = 50;
  std::uint64_t seed = 0;
  double alpha_max = 3.0;
  std::optional<double> sigma2;  // known value; nullopt = estimate (log-scale coordinate)
  bool estimate_mu = false;      // profile mu as mean(y)
  std::optional<double> fix_g, fix_w, fix_theta, fix_alpha;
};

struct CoordBox {
  std::string name;
  double lo = 0.0, hi = 0.0;
};

struct FitDiagnostics {
  std::vector<CoordBox> boxes;
  long evaluations = 0;
  int starts = 0;
  int sweeps = 0;
  double objective = -std::numeric_limits<double>::infinity();
};

struct SelectionResult {
  SubsetMask best_mask;
  Hyperparams hyper;
  Eigen::VectorXd beta_hat;  // full-p, original predictor scale
  // Mask bits -> log posterior probability over the enumerated model set.
  std::optional<std::vector<std::pair<std::uint64_t, double>>> log_posterior;
  FitDiagnostics diagnostics;
};

// Closed-form log marginal likelihood of y under the submodel with active
// design X_active, g-prior scale g, and noise variance sigma2. Rank-deficient
// active designs give -inf.
double log_marginal_given_model(const Eigen::MatrixXd& X_active,
                                const Eigen::VectorXd& y, double g,
                                double sigma2);

// log sum over submodels of prior mass times marginal likelihood. The sum
// runs over all 2^p masks, or over subsets of `support` when given (the
// partial-sum approximation). The design is standardized internally; when
// hyper.mu is present y is centered by it first.
double log_type_ii_likelihood(const Dataset& data, const priors::PriorSpec& prior,
                              const Hyperparams& hyper,
                              std::optional<SubsetMask> support = std::nullopt);

// Maximizes log_type_ii_likelihood over the family's free hyperparameters:
// grid prescan plus deterministic multi-start coordinate descent with
// golden-section line searches in transformed coordinates.
Hyperparams fit_type_ii(const Dataset& data, priors::PriorFamily family,
                        const FitOptions& options = {},
                        std::optional<SubsetMask> support = std::nullopt,
                        FitDiagnostics* diagnostics = nullptr);

// Highest-posterior mask under the given prior and hyperparameters; ties
// break toward smaller |mask|, then smaller mask bits. beta_hat comes from
// estimate_coefficients.
SelectionResult select_best_model(const Dataset& data,
                                  const priors::PriorSpec& prior,
                                  const Hyperparams& hyper,
                                  std::optional<SubsetMask> support = std::nullopt,
                                  bool with_posterior = false);

// Posterior-mean coefficients on the selected support, folded back to the
// original predictor scale; zeros elsewhere. mu = 0 for no-intercept models.
Eigen::VectorXd estimate_coefficients(const Dataset& data, const SubsetMask& mask,
                                      double g, double mu);

// Normalized posterior over all 2^p masks, indexed by mask bits (p <= 20).
std::vector<double> posterior_table(const Dataset& data,
                                    const priors::PriorSpec& prior,
                                    const Hyperparams& hyper);

// Normalize log weights into probabilities summing to one (log-sum-exp).
std::vector<double> normalize_log_weights(const std::vector<double>& logw);

// Convenience pipeline: fit hyperparameters, then select. The prior kernel is
// the correlation matrix of the standardized design.
SelectionResult run_selection(const Dataset& data, priors::PriorFamily family,
                              const FitOptions& options = {},
                              std::optional<SubsetMask> support = std::nullopt,
                              bool with_posterior = false);

// Rebuild a prior of the given family around hyper's parameter values.
priors::PriorSpec prior_with(priors::PriorFamily family, const Eigen::MatrixXd& R,
                             const Hyperparams& hyper);

}  // namespace dppsel::selection
