#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace dppsel {

// A regression problem as ingested: response, raw design, optional names.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> predictor_names;  // may be empty
  std::string response_name;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
};

}  // namespace dppsel
