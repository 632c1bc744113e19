#include "dppselect/selection.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "dppselect/errors.hpp"
#include "dppselect/linalg.hpp"
#include "dppselect/optim.hpp"
#include "dppselect/rng.hpp"

namespace dppsel::selection {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kEnumLimit = 25;   // hard cap on enumerated dimensions
constexpr int kTableLimit = 20;  // cap for full posterior tables

using priors::PriorFamily;

struct Prepared {
  linalg::StandardizedDesign xs;
  Eigen::MatrixXd R;
};

Prepared prepare(const Eigen::MatrixXd& X) {
  if (X.rows() < 1 || X.cols() < 1)
    throw DimensionMismatch("design matrix must be nonempty");
  if (!X.allFinite())
    throw Error(ErrorKind::data, "nonfinite_design",
                "design matrix has non-finite entries");
  Prepared pr;
  pr.xs = linalg::standardize(X);
  pr.R = linalg::correlation_kernel(pr.xs);
  return pr;
}

// Subsets of `support`, full set first, empty set last. The fixed order
// makes every reduction over models deterministic.
std::vector<std::uint64_t> enumerate_subsets(std::uint64_t support) {
  std::vector<std::uint64_t> out;
  out.reserve(std::size_t{1} << std::popcount(support));
  std::uint64_t sub = support;
  while (true) {
    out.push_back(sub);
    if (sub == 0) break;
    sub = (sub - 1) & support;
  }
  return out;
}

double log_sum_exp(const std::vector<double>& v) {
  double best = -kInf;
  for (double x : v) best = std::max(best, x);
  if (best == -kInf) return -kInf;
  double total = 0.0;
  for (double x : v) total += std::exp(x - best);
  return best + std::log(total);
}

// Per-mask quantities that do not depend on hyperparameters.
struct ModelTable {
  std::vector<std::uint64_t> bits;
  std::vector<int> size;
  std::vector<double> ss;  // NaN marks a rank-deficient submodel
  double yty = 0.0;
  int n = 0;
  int p = 0;
};

ModelTable build_model_table(const Eigen::MatrixXd& Xstd,
                             const Eigen::VectorXd& y, std::uint64_t support,
                             int p) {
  ModelTable t;
  t.n = static_cast<int>(Xstd.rows());
  t.p = p;
  t.yty = y.squaredNorm();
  t.bits = enumerate_subsets(support);
  t.size.reserve(t.bits.size());
  t.ss.reserve(t.bits.size());
  Eigen::MatrixXd cols(Xstd.rows(), p);
  for (std::uint64_t bits : t.bits) {
    const int k = std::popcount(bits);
    t.size.push_back(k);
    int c = 0;
    for (int j = 0; j < p; ++j)
      if ((bits >> j) & 1u) cols.col(c++) = Xstd.col(j);
    double ss;
    try {
      ss = linalg::projection_ss(cols.leftCols(k), y);
    } catch (const RankDeficient&) {
      ss = std::numeric_limits<double>::quiet_NaN();
    }
    t.ss.push_back(ss);
  }
  return t;
}

double log_marginal_from_ss(double ss, int k, int n, double yty, double g,
                            double sigma2) {
  if (std::isnan(ss)) return -kInf;
  return -0.5 * k * std::log1p(g) -
         0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) +
         (g / (1.0 + g)) * ss / (2.0 * sigma2) - yty / (2.0 * sigma2);
}

// The type-II likelihood as a function of hyperparameters, with the
// dataset-dependent pieces precomputed. The base-kernel log determinants are
// cached keyed on the kernel-shape parameter (theta or alpha), which is the
// only hyperparameter that forces refactorizations.
class TypeIIObjective {
 public:
  TypeIIObjective(ModelTable table, PriorFamily family, Eigen::MatrixXd R)
      : table_(std::move(table)), family_(family), R_(std::move(R)) {}

  double value(const Hyperparams& h) const {
    const double g = h.g;
    const double sigma2 = h.sigma2;
    if (!(g > 0.0) || !(sigma2 > 0.0)) return -kInf;
    double logw = 0.0, log1mw = 0.0, lognorm = 0.0;
    const std::vector<double>* logdets = nullptr;
    switch (family_) {
      case PriorFamily::bernoulli:
        if (!(h.w > 0.0 && h.w < 1.0)) return -kInf;
        logw = std::log(h.w);
        log1mw = std::log1p(-h.w);
        break;
      case PriorFamily::dpp:
      case PriorFamily::ldpp:
      case PriorFamily::gdpp: {
        if (!(h.w > 0.0)) return -kInf;
        logw = std::log(h.w);
        const double shape = family_ == PriorFamily::ldpp ? h.theta.value_or(1.0)
                             : family_ == PriorFamily::gdpp
                                 ? h.alpha.value_or(1.0)
                                 : 1.0;
        logdets = &base_logdets(shape);
        lognorm = linalg::log_det_plus_identity(h.w * base_);
        break;
      }
    }
    const double c0 = -0.5 * table_.n * std::log(2.0 * std::numbers::pi * sigma2) -
                      table_.yty / (2.0 * sigma2);
    const double shrink = g / (1.0 + g);
    const double log1pg = std::log1p(g);
    terms_.resize(table_.bits.size());
    for (std::size_t i = 0; i < table_.bits.size(); ++i) {
      const int k = table_.size[i];
      double lp = k * logw + (table_.p - k) * log1mw - lognorm;
      if (logdets) lp += (*logdets)[i];
      double lm = -kInf;
      if (!std::isnan(table_.ss[i]))
        lm = -0.5 * k * log1pg + shrink * table_.ss[i] / (2.0 * sigma2) + c0;
      terms_[i] = lp + lm;
    }
    return log_sum_exp(terms_);
  }

  const ModelTable& table() const { return table_; }

 private:
  const std::vector<double>& base_logdets(double shape) const {
    if (!cache_valid_ || cache_shape_ != shape) {
      switch (family_) {
        case PriorFamily::dpp:
          base_ = R_;
          break;
        case PriorFamily::ldpp:
          base_ = shape * R_ +
                  (1.0 - shape) * Eigen::MatrixXd::Identity(R_.rows(), R_.cols());
          break;
        case PriorFamily::gdpp:
          base_ = linalg::fractional_power(R_, shape);
          break;
        default:
          break;
      }
      cache_logdet_.resize(table_.bits.size());
      for (std::size_t i = 0; i < table_.bits.size(); ++i)
        cache_logdet_[i] = linalg::log_det_principal_submatrix(
            base_, SubsetMask(table_.p, table_.bits[i]));
      cache_shape_ = shape;
      cache_valid_ = true;
    }
    return cache_logdet_;
  }

  ModelTable table_;
  PriorFamily family_;
  Eigen::MatrixXd R_;
  mutable bool cache_valid_ = false;
  mutable double cache_shape_ = 0.0;
  mutable Eigen::MatrixXd base_;
  mutable std::vector<double> cache_logdet_;
  mutable std::vector<double> terms_;
};

std::uint64_t support_bits_or_full(const std::optional<SubsetMask>& support,
                                   int p) {
  if (!support) {
    if (p > kEnumLimit) throw TooLarge("enumerated dimension", p, kEnumLimit);
    return SubsetMask::full(p).bits();
  }
  if (support->dim() != p)
    throw DimensionMismatch("support dimension does not match design");
  if (support->count() > kEnumLimit)
    throw TooLarge("support cardinality", support->count(), kEnumLimit);
  return support->bits();
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

struct Coordinate {
  CoordBox box;
  std::function<void(Hyperparams&, double)> apply;
};

}  // namespace

double log_marginal_given_model(const Eigen::MatrixXd& X_active,
                                const Eigen::VectorXd& y, double g,
                                double sigma2) {
  if (!(g > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "g must be positive");
  if (!(sigma2 > 0.0))
    throw Error(ErrorKind::config, "bad_hyperparameter", "sigma2 must be positive");
  const int k = static_cast<int>(X_active.cols());
  const int n = static_cast<int>(y.size());
  double ss = 0.0;
  if (k > 0) {
    try {
      ss = linalg::projection_ss(X_active, y);
    } catch (const RankDeficient&) {
      return -kInf;
    }
  }
  return log_marginal_from_ss(ss, k, n, y.squaredNorm(), g, sigma2);
}

double log_type_ii_likelihood(const Dataset& data, const priors::PriorSpec& prior,
                              const Hyperparams& hyper,
                              std::optional<SubsetMask> support) {
  const int p = data.p();
  if (prior.dim() >= 0 && prior.dim() != p)
    throw DimensionMismatch("prior dimension does not match design");
  const std::uint64_t bits = support_bits_or_full(support, p);
  Prepared pr = prepare(data.X);
  Eigen::VectorXd yeff = data.y;
  if (hyper.mu) yeff.array() -= *hyper.mu;
  Hyperparams h = hyper;
  if (!h.theta && prior.family() == PriorFamily::ldpp) h.theta = prior.theta();
  if (!h.alpha && prior.family() == PriorFamily::gdpp) h.alpha = prior.alpha();
  TypeIIObjective obj(build_model_table(pr.xs.values, yeff, bits, p),
                      prior.family(), pr.R);
  return obj.value(h);
}

Hyperparams fit_type_ii(const Dataset& data, priors::PriorFamily family,
                        const FitOptions& options,
                        std::optional<SubsetMask> support,
                        FitDiagnostics* diagnostics) {
  const int p = data.p();
  const std::uint64_t bits = support_bits_or_full(support, p);
  Prepared pr = prepare(data.X);

  Hyperparams base;
  base.sigma2_estimated = !options.sigma2.has_value();
  if (options.sigma2) {
    if (!(*options.sigma2 > 0.0))
      throw Error(ErrorKind::config, "bad_hyperparameter", "sigma2 must be positive");
    base.sigma2 = *options.sigma2;
  }
  Eigen::VectorXd yeff = data.y;
  if (options.estimate_mu) {
    base.mu = data.y.mean();
    yeff.array() -= *base.mu;
  }
  if (family == PriorFamily::ldpp) base.theta = options.fix_theta.value_or(1.0);
  if (family == PriorFamily::gdpp) base.alpha = options.fix_alpha.value_or(1.0);
  if (options.fix_g) base.g = *options.fix_g;
  if (options.fix_w) base.w = *options.fix_w;

  TypeIIObjective obj(build_model_table(pr.xs.values, yeff, bits, p), family,
                      pr.R);

  std::vector<Coordinate> coords;
  if (!options.fix_g)
    coords.push_back({{"log_g", -8.0, 16.0},
                      [](Hyperparams& h, double t) { h.g = std::exp(t); }});
  if (!options.fix_w) {
    if (family == PriorFamily::bernoulli)
      coords.push_back({{"logit_w", -8.0, 8.0},
                        [](Hyperparams& h, double t) { h.w = sigmoid(t); }});
    else
      coords.push_back({{"log_w", -8.0, 8.0},
                        [](Hyperparams& h, double t) { h.w = std::exp(t); }});
  }
  if (family == PriorFamily::ldpp && !options.fix_theta)
    coords.push_back({{"logit_theta", -8.0, 8.0},
                      [](Hyperparams& h, double t) { h.theta = sigmoid(t); }});
  if (family == PriorFamily::gdpp && !options.fix_alpha)
    coords.push_back({{"alpha", 0.0, options.alpha_max},
                      [](Hyperparams& h, double t) { h.alpha = t; }});
  if (base.sigma2_estimated) {
    const double scale =
        std::log(std::max(yeff.squaredNorm() / std::max(1, data.n()), 1e-12));
    coords.push_back({{"log_sigma2", scale - 10.0, scale + 4.0},
                      [](Hyperparams& h, double t) { h.sigma2 = std::exp(t); }});
  }
  const int d = static_cast<int>(coords.size());

  FitDiagnostics diag;
  for (const Coordinate& c : coords) diag.boxes.push_back(c.box);

  auto evaluate = [&](const std::vector<double>& t) {
    Hyperparams h = base;
    for (int i = 0; i < d; ++i) coords[static_cast<std::size_t>(i)].apply(h, t[static_cast<std::size_t>(i)]);
    ++diag.evaluations;
    return obj.value(h);
  };

  std::vector<double> best_t(static_cast<std::size_t>(d));
  double best_f = -kInf;

  if (d == 0) {
    best_f = obj.value(base);
  } else {
    // Coarse prescan; the shape coordinate varies slowest so the cached
    // base-kernel factorizations are reused across the grid.
    const int grid = options.grid > 0 ? options.grid : (d <= 3 ? 9 : 5);
    std::vector<int> odo(static_cast<std::size_t>(d), 0);
    std::vector<double> t(static_cast<std::size_t>(d));
    bool done = false;
    while (!done) {
      for (int i = 0; i < d; ++i) {
        const CoordBox& b = coords[static_cast<std::size_t>(i)].box;
        t[static_cast<std::size_t>(i)] =
            b.lo + (odo[static_cast<std::size_t>(i)] + 0.5) / grid * (b.hi - b.lo);
      }
      const double f = evaluate(t);
      if (f > best_f) {
        best_f = f;
        best_t = t;
      }
      int i = 0;
      for (; i < d; ++i) {
        if (++odo[static_cast<std::size_t>(i)] < grid) break;
        odo[static_cast<std::size_t>(i)] = 0;
      }
      done = i == d;
    }

    // Start points: a fixed Latin layout plus the prescan winner.
    CounterRng rng(options.seed);
    std::vector<std::vector<double>> starts;
    for (int s = 0; s < options.starts; ++s)
      starts.emplace_back(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      CounterRng sub = rng.substream(static_cast<std::uint64_t>(i));
      std::vector<int> perm = sub.sample_without_replacement(options.starts,
                                                             options.starts);
      const CoordBox& b = coords[static_cast<std::size_t>(i)].box;
      for (int s = 0; s < options.starts; ++s)
        starts[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] =
            b.lo + (perm[static_cast<std::size_t>(s)] + 0.5) / options.starts *
                       (b.hi - b.lo);
    }
    starts.push_back(best_t);

    for (std::vector<double>& t0 : starts) {
      ++diag.starts;
      std::vector<double> cur = t0;
      double f = evaluate(cur);
      for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        ++diag.sweeps;
        const double f_before = f;
        for (int i = 0; i < d; ++i) {
          const CoordBox& b = coords[static_cast<std::size_t>(i)].box;
          std::vector<double> probe = cur;
          const double x = golden_section_max(
              [&](double v) {
                probe[static_cast<std::size_t>(i)] = v;
                return evaluate(probe);
              },
              b.lo, b.hi, 1e-9);
          probe[static_cast<std::size_t>(i)] = x;
          const double fx = evaluate(probe);
          if (fx > f) {  // accept only improvements: descent stays monotone
            cur = probe;
            f = fx;
          }
        }
        if (!(f > f_before + options.tol)) break;
      }
      if (f > best_f) {
        best_f = f;
        best_t = cur;
      }
    }
  }

  if (!std::isfinite(best_f))
    throw OptimizationFailed("type II likelihood is non-finite everywhere searched");

  Hyperparams fitted = base;
  for (int i = 0; i < d; ++i)
    coords[static_cast<std::size_t>(i)].apply(fitted, best_t[static_cast<std::size_t>(i)]);
  diag.objective = best_f;
  if (diagnostics) *diagnostics = diag;
  return fitted;
}

SelectionResult select_best_model(const Dataset& data,
                                  const priors::PriorSpec& prior,
                                  const Hyperparams& hyper,
                                  std::optional<SubsetMask> support,
                                  bool with_posterior) {
  const int p = data.p();
  const std::uint64_t bits = support_bits_or_full(support, p);
  Prepared pr = prepare(data.X);
  Eigen::VectorXd yeff = data.y;
  if (hyper.mu) yeff.array() -= *hyper.mu;

  const priors::PriorSpec bound =
      prior.family() == PriorFamily::bernoulli
          ? prior_with(prior.family(), Eigen::MatrixXd(), hyper)
          : prior_with(prior.family(), prior.correlation(), hyper);

  const ModelTable table = build_model_table(pr.xs.values, yeff, bits, p);
  std::vector<double> scores(table.bits.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < table.bits.size(); ++i) {
    const SubsetMask m(p, table.bits[i]);
    scores[i] = bound.log_prior_unnormalized(m) +
                log_marginal_from_ss(table.ss[i], table.size[i], table.n,
                                     table.yty, hyper.g, hyper.sigma2);
    if (i == 0) continue;
    const bool better =
        scores[i] > scores[best] ||
        (scores[i] == scores[best] &&
         (table.size[i] < table.size[best] ||
          (table.size[i] == table.size[best] && table.bits[i] < table.bits[best])));
    if (better) best = i;
  }
  if (scores[best] == -kInf)
    throw OptimizationFailed("every enumerated submodel has zero posterior mass");

  SelectionResult result;
  result.best_mask = SubsetMask(p, table.bits[best]);
  result.hyper = hyper;
  result.beta_hat = estimate_coefficients(data, result.best_mask, hyper.g,
                                          hyper.mu.value_or(0.0));
  if (with_posterior) {
    const double lse = log_sum_exp(scores);
    std::vector<std::pair<std::uint64_t, double>> post;
    post.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      post.emplace_back(table.bits[i], scores[i] - lse);
    result.log_posterior = std::move(post);
  }
  return result;
}

Eigen::VectorXd estimate_coefficients(const Dataset& data, const SubsetMask& mask,
                                      double g, double mu) {
  const int p = data.p();
  if (mask.dim() != p)
    throw DimensionMismatch("mask dimension does not match design");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (mask.empty()) return beta;
  const linalg::StandardizedDesign xs = linalg::standardize(data.X);
  const std::vector<int> active = mask.indices();
  const int k = static_cast<int>(active.size());
  Eigen::MatrixXd Xa(data.n(), k);
  for (int c = 0; c < k; ++c) Xa.col(c) = xs.values.col(active[static_cast<std::size_t>(c)]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xa);
  const Eigen::MatrixXd& Rf = qr.matrixQR();
  const double lead = std::abs(Rf(0, 0));
  if (lead == 0.0 || std::abs(Rf(k - 1, k - 1)) < linalg::kPivotTol * lead)
    throw RankDeficient("selected design submatrix");
  const Eigen::VectorXd r = data.y.array() - mu;
  const Eigen::VectorXd beta_std = qr.solve(r);
  const double shrink = g / (1.0 + g);
  for (int c = 0; c < k; ++c) {
    const int j = active[static_cast<std::size_t>(c)];
    beta[j] = shrink * beta_std[c] / xs.column_scales[j];
  }
  return beta;
}

std::vector<double> posterior_table(const Dataset& data,
                                    const priors::PriorSpec& prior,
                                    const Hyperparams& hyper) {
  const int p = data.p();
  if (p > kTableLimit) throw TooLarge("posterior table dimension", p, kTableLimit);
  Prepared pr = prepare(data.X);
  Eigen::VectorXd yeff = data.y;
  if (hyper.mu) yeff.array() -= *hyper.mu;
  const priors::PriorSpec bound =
      prior.family() == PriorFamily::bernoulli
          ? prior_with(prior.family(), Eigen::MatrixXd(), hyper)
          : prior_with(prior.family(), prior.correlation(), hyper);
  const std::size_t count = std::size_t{1} << p;
  std::vector<double> scores(count);
  Eigen::MatrixXd cols(data.n(), p);
  for (std::size_t mask_bits = 0; mask_bits < count; ++mask_bits) {
    const SubsetMask m(p, mask_bits);
    const int k = m.count();
    int c = 0;
    for (int j = 0; j < p; ++j)
      if (m.contains(j)) cols.col(c++) = pr.xs.values.col(j);
    double ss = std::numeric_limits<double>::quiet_NaN();
    try {
      ss = k == 0 ? 0.0 : linalg::projection_ss(cols.leftCols(k), yeff);
    } catch (const RankDeficient&) {
    }
    scores[mask_bits] =
        bound.log_prior_unnormalized(m) +
        log_marginal_from_ss(ss, k, data.n(), yeff.squaredNorm(), hyper.g,
                             hyper.sigma2);
  }
  return normalize_log_weights(scores);
}

std::vector<double> normalize_log_weights(const std::vector<double>& logw) {
  const double lse = log_sum_exp(logw);
  std::vector<double> out(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i)
    out[i] = lse == -kInf ? 0.0 : std::exp(logw[i] - lse);
  return out;
}

SelectionResult run_selection(const Dataset& data, priors::PriorFamily family,
                              const FitOptions& options,
                              std::optional<SubsetMask> support,
                              bool with_posterior) {
  FitDiagnostics diag;
  const Hyperparams fitted = fit_type_ii(data, family, options, support, &diag);
  priors::PriorSpec prior = family == PriorFamily::bernoulli
                                ? prior_with(family, Eigen::MatrixXd(), fitted)
                                : prior_with(family, prepare(data.X).R, fitted);
  SelectionResult result =
      select_best_model(data, prior, fitted, support, with_posterior);
  result.diagnostics = diag;
  return result;
}

priors::PriorSpec prior_with(priors::PriorFamily family, const Eigen::MatrixXd& R,
                             const Hyperparams& hyper) {
  switch (family) {
    case PriorFamily::bernoulli:
      return priors::PriorSpec::bernoulli(hyper.w);
    case PriorFamily::dpp:
      return priors::PriorSpec::dpp(R, hyper.w);
    case PriorFamily::ldpp:
      return priors::PriorSpec::ldpp(R, hyper.w, hyper.theta.value_or(1.0));
    case PriorFamily::gdpp:
      return priors::PriorSpec::gdpp(R, hyper.w, hyper.alpha.value_or(1.0));
  }
  throw Error(ErrorKind::config, "bad_family", "unknown prior family");
}

}  // namespace dppsel::selection
