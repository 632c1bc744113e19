#include "dppselect/preselect.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dppselect/errors.hpp"

namespace dppsel::preselect {

namespace {

constexpr double kCorrTol = 1e-12;

}  // namespace

LarsPath lars_path(const linalg::StandardizedDesign& xs,
                   const Eigen::VectorXd& y_centered, int max_steps) {
  const Eigen::MatrixXd& X = xs.values;
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (y_centered.size() != n)
    throw DimensionMismatch("response length does not match design rows");
  if (max_steps > std::min(n - 1, p))
    throw DimensionMismatch("max_steps exceeds min(n - 1, p)");

  LarsPath path;
  std::vector<bool> active(static_cast<std::size_t>(p), false);
  std::vector<bool> excluded(static_cast<std::size_t>(p), false);
  std::vector<int> order;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd fit = Eigen::VectorXd::Zero(n);

  while (static_cast<int>(order.size()) < max_steps) {
    const Eigen::VectorXd c = X.transpose() * (y_centered - fit);

    // Next entrant: largest |correlation| among unused predictors.
    int entrant = -1;
    double cmax = 0.0;
    for (int j = 0; j < p; ++j) {
      if (active[static_cast<std::size_t>(j)] || excluded[static_cast<std::size_t>(j)])
        continue;
      if (std::abs(c[j]) > cmax) {
        cmax = std::abs(c[j]);
        entrant = j;
      }
    }
    if (entrant < 0 || cmax < kCorrTol) break;

    active[static_cast<std::size_t>(entrant)] = true;
    order.push_back(entrant);

    // Equiangular direction over the signed active columns.
    const int k = static_cast<int>(order.size());
    Eigen::MatrixXd Xa(n, k);
    Eigen::VectorXd signs(k);
    for (int a = 0; a < k; ++a) {
      const int j = order[static_cast<std::size_t>(a)];
      signs[a] = c[j] >= 0.0 ? 1.0 : -1.0;
      Xa.col(a) = signs[a] * X.col(j);
    }
    const Eigen::MatrixXd G = Xa.transpose() * Xa;
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    bool degenerate = llt.info() != Eigen::Success;
    Eigen::VectorXd ga;
    double denom = 0.0;
    if (!degenerate) {
      ga = llt.solve(Eigen::VectorXd::Ones(k));
      denom = ga.sum();
      degenerate = !(denom > kCorrTol) || !ga.allFinite();
    }
    if (degenerate) {
      // Exact duplicate of an earlier entrant: drop it and move on.
      active[static_cast<std::size_t>(entrant)] = false;
      excluded[static_cast<std::size_t>(entrant)] = true;
      path.skipped.push_back(entrant);
      order.pop_back();
      continue;
    }
    const double A = 1.0 / std::sqrt(denom);
    const Eigen::VectorXd wdir = A * ga;
    const Eigen::VectorXd u = Xa * wdir;
    const Eigen::VectorXd a = X.transpose() * u;

    // Step to the next tie among inactive predictors, or to the full
    // least-squares point when none remains.
    const double C = cmax;
    double step = C / A;
    for (int j = 0; j < p; ++j) {
      if (active[static_cast<std::size_t>(j)] || excluded[static_cast<std::size_t>(j)])
        continue;
      for (const double cand : {(C - c[j]) / (A - a[j]), (C + c[j]) / (A + a[j])}) {
        if (std::isfinite(cand) && cand > kCorrTol && cand < step) step = cand;
      }
    }

    for (int idx = 0; idx < k; ++idx)
      beta[order[static_cast<std::size_t>(idx)]] += step * signs[idx] * wdir[idx];
    fit += step * u;
    path.breakpoints.push_back(beta);
  }

  path.entry_order = std::move(order);
  return path;
}

SubsetMask select_support(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          int k) {
  const int p = static_cast<int>(X.cols());
  const int n = static_cast<int>(X.rows());
  if (p <= k) return SubsetMask::full(p);
  if (k > std::min(n - 1, p))
    throw DimensionMismatch("support size exceeds min(n - 1, p)");
  const linalg::StandardizedDesign xs = linalg::standardize(X);
  const Eigen::VectorXd yc = y.array() - y.mean();
  const LarsPath path = lars_path(xs, yc, k);
  SubsetMask mask(p);
  for (int j : path.entry_order) mask.set(j);
  return mask;
}

}  // namespace dppsel::preselect
