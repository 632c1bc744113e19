#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "dppselect/mask.hpp"

namespace dppsel::priors {

enum class PriorFamily { bernoulli, dpp, ldpp, gdpp };

std::string family_name(PriorFamily family);
std::optional<PriorFamily> parse_family(const std::string& name);

// Log prior mass over subset masks. Kernel families share one algebraic
// form: unnormalized mass w^|m| det(B_m) with base kernel B depending on the
// family (R, theta*R + (1-theta)*I, or R^alpha), normalizer det(w*B + I).
// The Bernoulli mass w^|m| (1-w)^(p-|m|) is already normalized.
//
// Immutable after construction; the GDPP power is computed eagerly, so all
// queries are read-only and safe to share across threads.
class PriorSpec {
 public:
  static PriorSpec bernoulli(double w);
  static PriorSpec dpp(Eigen::MatrixXd R, double w);
  static PriorSpec ldpp(Eigen::MatrixXd R, double w, double theta);
  static PriorSpec gdpp(Eigen::MatrixXd R, double w, double alpha);

  PriorFamily family() const { return family_; }
  double w() const { return w_; }
  double theta() const { return theta_; }
  double alpha() const { return alpha_; }

  // -1 for the Bernoulli family (any mask length is accepted).
  int dim() const;

  // Correlation kernel the spec was built from (kernel families only).
  const Eigen::MatrixXd& correlation() const;

  // Family base kernel B: R, theta*R + (1-theta)*I, or R^alpha.
  const Eigen::MatrixXd& base_kernel() const;

  // w * B, the kernel whose determinants give the unnormalized masses.
  Eigen::MatrixXd effective_kernel() const;

  double log_prior_unnormalized(const SubsetMask& mask) const;
  double log_normalizer() const;

 private:
  PriorSpec() = default;

  PriorFamily family_ = PriorFamily::bernoulli;
  double w_ = 0.5;
  double theta_ = 1.0;
  double alpha_ = 1.0;
  Eigen::MatrixXd R_;
  Eigen::MatrixXd base_;
};

// Exact normalized probabilities over all 2^p masks, indexed by mask bits.
// Sums to one within 1e-12. Guards p <= 20.
std::vector<double> prior_table(const PriorSpec& spec, int p);

// Expected subset size under prior_table; enumeration-scale diagnostic.
double expected_size(const PriorSpec& spec, int p);

// Residual of the pair-inclusion identity
//   P({i,j}) = [P({i}) P({j}) - (K_ij / det(K+I))^2] * det(K+I)
// for the effective kernel K; zero within 1e-12 for kernel families.
double pair_suppression_residual(const PriorSpec& spec, int i, int j);

}  // namespace dppsel::priors
