#pragma once

#include <Eigen/Core>

#include "dppselect/mask.hpp"

namespace dppsel::linalg {

// Design with columns shifted to mean zero and scaled to unit Euclidean norm.
// The scale s_j is the root sum of squared deviations (no 1/n factor).
struct StandardizedDesign {
  Eigen::MatrixXd values;
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_scales;
};

// Relative pivot threshold below which a symmetric factorization is treated
// as singular. Singular principal minors mean prior probability exactly zero.
inline constexpr double kPivotTol = 1e-12;

StandardizedDesign standardize(const Eigen::MatrixXd& X);

// R = Xs' * Xs; unit diagonal, off-diagonals clamped to [-1, 1].
Eigen::MatrixXd correlation_kernel(const StandardizedDesign& xs);

// log det of the principal submatrix L[mask, mask]. Empty mask gives 0.
// Numerically singular minors give -inf.
double log_det_principal_submatrix(const Eigen::MatrixXd& L,
                                   const SubsetMask& mask);

// log det(L + I) for symmetric PSD L.
double log_det_plus_identity(const Eigen::MatrixXd& L);

// Symmetric fractional power via eigendecomposition; eigenvalues are clamped
// at zero before powering, and 0^0 = 1 so alpha = 0 returns the identity.
Eigen::MatrixXd fractional_power(const Eigen::MatrixXd& R, double alpha);

// Squared norm of the orthogonal projection of y onto col(X_active).
// Zero columns give 0; rank deficiency throws RankDeficient.
double projection_ss(const Eigen::MatrixXd& X_active, const Eigen::VectorXd& y);

// Mahalanobis distance of each row from the column-mean vector, using the
// sample covariance with divisor n-1 of the raw (unstandardized) design.
Eigen::VectorXd mahalanobis_distances(const Eigen::MatrixXd& X);

}  // namespace dppsel::linalg
