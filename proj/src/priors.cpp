#include "dppselect/priors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "dppselect/errors.hpp"
#include "dppselect/linalg.hpp"

namespace dppsel::priors {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTableLimit = 20;

void validate_kernel(const Eigen::MatrixXd& R) {
  if (R.rows() != R.cols())
    throw DimensionMismatch("kernel matrix must be square");
  if (R.rows() == 0) throw DimensionMismatch("kernel matrix must be nonempty");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DimensionMismatch("kernel matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
    throw DimensionMismatch("kernel matrix is not positive semidefinite");
}

}  // namespace

std::string family_name(PriorFamily family) {
  switch (family) {
    case PriorFamily::bernoulli: return "EB";
    case PriorFamily::dpp: return "DPP";
    case PriorFamily::ldpp: return "LDPP";
    case PriorFamily::gdpp: return "GDPP";
  }
  return "?";
}

std::optional<PriorFamily> parse_family(const std::string& name) {
  if (name == "EB" || name == "bernoulli") return PriorFamily::bernoulli;
  if (name == "DPP" || name == "dpp") return PriorFamily::dpp;
  if (name == "LDPP" || name == "ldpp") return PriorFamily::ldpp;
  if (name == "GDPP" || name == "gdpp") return PriorFamily::gdpp;
  return std::nullopt;
}

PriorSpec PriorSpec::bernoulli(double w) {
  if (!(w > 0.0 && w < 1.0))
    throw Error(ErrorKind::config, "bad_hyperparameter",
                "Bernoulli prior requires w in (0, 1)");
  PriorSpec s;
  s.family_ = PriorFamily::bernoulli;
  s.w_ = w;
  return s;
}

PriorSpec PriorSpec::dpp(Eigen::MatrixXd R, double w) {
  if (!(w > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "DPP prior requires w > 0");
  validate_kernel(R);
  PriorSpec s;
  s.family_ = PriorFamily::dpp;
  s.w_ = w;
  s.R_ = std::move(R);
  s.base_ = s.R_;
  return s;
}

PriorSpec PriorSpec::ldpp(Eigen::MatrixXd R, double w, double theta) {
  if (!(w > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "LDPP prior requires w > 0");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw Error(ErrorKind::config, "bad_hyperparameter",
                "LDPP prior requires theta in [0, 1]");
  validate_kernel(R);
  PriorSpec s;
  s.family_ = PriorFamily::ldpp;
  s.w_ = w;
  s.theta_ = theta;
  s.R_ = std::move(R);
  s.base_ = theta * s.R_ +
            (1.0 - theta) * Eigen::MatrixXd::Identity(s.R_.rows(), s.R_.cols());
  return s;
}

PriorSpec PriorSpec::gdpp(Eigen::MatrixXd R, double w, double alpha) {
  if (!(w > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "GDPP prior requires w > 0");
  if (!(alpha >= 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter",
                "GDPP prior requires alpha >= 0");
  validate_kernel(R);
  PriorSpec s;
  s.family_ = PriorFamily::gdpp;
  s.w_ = w;
  s.alpha_ = alpha;
  s.R_ = std::move(R);
  s.base_ = linalg::fractional_power(s.R_, alpha);
  return s;
}

int PriorSpec::dim() const {
  return family_ == PriorFamily::bernoulli ? -1 : static_cast<int>(R_.rows());
}

const Eigen::MatrixXd& PriorSpec::correlation() const {
  if (family_ == PriorFamily::bernoulli)
    throw DimensionMismatch("Bernoulli prior carries no kernel");
  return R_;
}

const Eigen::MatrixXd& PriorSpec::base_kernel() const {
  if (family_ == PriorFamily::bernoulli)
    throw DimensionMismatch("Bernoulli prior carries no kernel");
  return base_;
}

Eigen::MatrixXd PriorSpec::effective_kernel() const {
  if (family_ == PriorFamily::bernoulli)
    throw DimensionMismatch("Bernoulli prior carries no kernel");
  return w_ * base_;
}

double PriorSpec::log_prior_unnormalized(const SubsetMask& mask) const {
  const int k = mask.count();
  if (family_ == PriorFamily::bernoulli) {
    return k * std::log(w_) + (mask.dim() - k) * std::log(1.0 - w_);
  }
  if (mask.dim() != dim())
    throw DimensionMismatch("mask dimension " + std::to_string(mask.dim()) +
                            " does not match prior dimension " +
                            std::to_string(dim()));
  const double logdet = linalg::log_det_principal_submatrix(base_, mask);
  if (logdet == -kInf) return -kInf;
  return k * std::log(w_) + logdet;
}

double PriorSpec::log_normalizer() const {
  if (family_ == PriorFamily::bernoulli) return 0.0;
  return linalg::log_det_plus_identity(w_ * base_);
}

std::vector<double> prior_table(const PriorSpec& spec, int p) {
  if (p > kTableLimit) throw TooLarge("prior table dimension", p, kTableLimit);
  if (p < 1) throw DimensionMismatch("prior table needs p >= 1");
  if (spec.dim() >= 0 && spec.dim() != p)
    throw DimensionMismatch("table dimension does not match prior dimension");
  const std::size_t count = std::size_t{1} << p;
  std::vector<double> logmass(count);
  double best = -kInf;
  for (std::size_t bits = 0; bits < count; ++bits) {
    logmass[bits] = spec.log_prior_unnormalized(SubsetMask(p, bits));
    best = std::max(best, logmass[bits]);
  }
  // Normalize by the table's own sum so the result adds to one exactly
  // up to rounding, independent of the determinant identity.
  double total = 0.0;
  for (double lm : logmass) total += std::exp(lm - best);
  std::vector<double> prob(count);
  for (std::size_t bits = 0; bits < count; ++bits)
    prob[bits] = std::exp(logmass[bits] - best) / total;
  return prob;
}

double expected_size(const PriorSpec& spec, int p) {
  const std::vector<double> prob = prior_table(spec, p);
  double mean = 0.0;
  for (std::size_t bits = 0; bits < prob.size(); ++bits)
    mean += prob[bits] * std::popcount(bits);
  return mean;
}

double pair_suppression_residual(const PriorSpec& spec, int i, int j) {
  if (spec.family() == PriorFamily::bernoulli)
    throw DimensionMismatch("pair suppression check needs a kernel family");
  if (i == j) throw DimensionMismatch("pair suppression check needs i != j");
  const int p = spec.dim();
  const Eigen::MatrixXd K = spec.effective_kernel();
  const double log_norm = spec.log_normalizer();
  const double det_norm = std::exp(log_norm);
  const auto prob = [&](const SubsetMask& m) {
    return std::exp(spec.log_prior_unnormalized(m) - log_norm);
  };
  const double p_ij = prob(SubsetMask::of(p, {i, j}));
  const double p_i = prob(SubsetMask::of(p, {i}));
  const double p_j = prob(SubsetMask::of(p, {j}));
  const double k_ij = K(i, j) / det_norm;
  return p_ij - (p_i * p_j - k_ij * k_ij) * det_norm;
}

}  // namespace dppsel::priors
