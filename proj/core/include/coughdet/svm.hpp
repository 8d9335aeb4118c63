#pragma once

#include <Eigen/Dense>
#include <vector>

namespace coughdet {

enum class SvmLabel { cough, non_cough };

struct SvmConfig {
    double c = 1.0;
    double tol = 1e-4;
    long max_iterations = 100000;
};

/// Soft-margin linear two-class classifier. Positive class (cough) is +1.
struct SvmModel {
    Eigen::VectorXd w;
    double b = 0.0;
    double c = 1.0;
    std::vector<int> support_indices;  // training rows with alpha > 0
    double objective = 0.0;            // primal value at the returned (w, b)
};

/// Solves the dual with maximal-violating-pair SMO updates. Deterministic
/// for a fixed data order. `dual_trace`, when given, receives the dual
/// objective after each pair update.
SvmModel fit_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvmConfig& config,
                 std::vector<double>* dual_trace = nullptr);

double svm_decision(const SvmModel& model, const Eigen::VectorXd& x);

SvmLabel svm_predict(const SvmModel& model, const Eigen::VectorXd& x);

/// Primal objective 0.5*|w|^2 + C * sum hinge, shared with the tests' oracle.
double svm_primal_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, double b, double c);

}  // namespace coughdet
