#pragma once

#include <Eigen/Dense>

namespace coughdet {

/// Orthogonal projection fitted by eigendecomposition of the training
/// covariance; keeps the minimal number of components whose cumulative
/// eigenvalue share reaches variance_target.
struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd projection;   // k x dim, orthonormal rows
    Eigen::VectorXd eigenvalues;  // full spectrum, descending, clamped >= 0
    int k = 0;
    double variance_target = 0.95;
};

PcaModel fit_pca(const Eigen::MatrixXd& X, double variance_target);

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& x);

/// Transforms each row of X; returns rows x k score matrix.
Eigen::MatrixXd pca_transform_rows(const PcaModel& model, const Eigen::MatrixXd& X);

}  // namespace coughdet
