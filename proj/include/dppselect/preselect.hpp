#pragma once

#include <Eigen/Core>
#include <vector>

#include "dppselect/linalg.hpp"
#include "dppselect/mask.hpp"

namespace dppsel::preselect {

struct LarsPath {
  std::vector<int> entry_order;
  std::vector<Eigen::VectorXd> breakpoints;  // coefficients (standardized scale)
  std::vector<int> skipped;                  // exact duplicates, dropped
};

// Plain least angle regression (no lasso modification) on a standardized
// design and centered response. At each step the predictor most correlated
// with the residual joins the active set and coefficients advance along the
// equiangular direction to the next tie. Predictors whose entry would make
// the equiangular system singular (exact duplicates) are skipped
// deterministically, lowest entered index winning.
LarsPath lars_path(const linalg::StandardizedDesign& xs,
                   const Eigen::VectorXd& y_centered, int max_steps);

// Mask of the first k LARS entrants; standardizes X and centers y first.
// All predictors when p <= k.
SubsetMask select_support(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          int k = 10);

}  // namespace dppsel::preselect
