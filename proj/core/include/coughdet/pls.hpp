#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace coughdet {

/// Single-response partial least squares fitted with NIPALS.
/// Weights, loadings and per-component explained sum of squares of y are
/// kept because the variable selectors need them.
struct PlsModel {
    int n_components = 0;  // achieved count (may stop early on rank deficiency)
    Eigen::VectorXd x_mean;
    double y_mean = 0.0;
    Eigen::MatrixXd weights;     // p x A, unit-norm columns
    Eigen::MatrixXd loadings;    // p x A
    Eigen::VectorXd y_loadings;  // A
    Eigen::VectorXd b;           // p, final regression coefficients
    Eigen::VectorXd ssy_per_component;  // A
    double ssy_cum = 0.0;
    Eigen::MatrixXd scores;  // n x A training score vectors, mutually orthogonal
};

PlsModel fit_pls1(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int n_components);

Eigen::VectorXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& X);

/// Row i holds the regression coefficients of a fit with sample i left out.
Eigen::MatrixXd loo_coefficients(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 int n_components);

/// RMSE of out-of-fold predictions under a seeded fold shuffle.
double cv_rmse(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int n_components, int folds,
               std::uint64_t seed);

}  // namespace coughdet
