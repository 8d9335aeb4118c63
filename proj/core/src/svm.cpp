#include "coughdet/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coughdet/errors.hpp"

namespace coughdet {

double svm_primal_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, double b, double c) {
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        hinge += std::max(0.0, 1.0 - y(i) * (X.row(i).dot(w) + b));
    return 0.5 * w.squaredNorm() + c * hinge;
}

SvmModel fit_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvmConfig& config,
                 std::vector<double>* dual_trace) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    if (config.c <= 0) throw ConfigInvalid("C must be positive");
    if (y.size() != n) throw DimensionMismatch("label count != sample count");
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y(i) > 0) has_pos = true;
        else has_neg = true;
    }
    if (!has_pos || !has_neg) throw SingleClass("both classes required for training");

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(n);  // w . x_i
    const Eigen::VectorXd sq_norms = X.rowwise().squaredNorm();
    const double c = config.c;

    double gap = std::numeric_limits<double>::infinity();
    double bias = 0.0;
    bool converged = false;
    for (long iter = 0;; ++iter) {
        // Maximal violating pair over the feasibility sets.
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        Eigen::Index i_up = -1, i_low = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = y(i) - scores(i);  // -y_i * grad_i
            const bool in_up = (y(i) > 0 && alpha(i) < c) || (y(i) < 0 && alpha(i) > 0);
            const bool in_low = (y(i) > 0 && alpha(i) > 0) || (y(i) < 0 && alpha(i) < c);
            if (in_up && v > m_up) { m_up = v; i_up = i; }
            if (in_low && v < m_low) { m_low = v; i_low = i; }
        }
        gap = m_up - m_low;
        bias = 0.5 * (m_up + m_low);
        if (gap < config.tol || i_up < 0 || i_low < 0) {
            converged = true;
            break;
        }
        if (iter >= config.max_iterations) break;

        const Eigen::Index i = i_up, j = i_low;
        const double curvature =
            std::max(sq_norms(i) + sq_norms(j) - 2.0 * X.row(i).dot(X.row(j)), 1e-12);
        // Move alpha_i by delta and alpha_j by -y_i*y_j*delta along the
        // equality constraint; clip to the box.
        const double grad_i = y(i) * scores(i) - 1.0;
        const double grad_j = y(j) * scores(j) - 1.0;
        double delta = -(grad_i - y(i) * y(j) * grad_j) / curvature;
        const double s = y(i) * y(j);
        double lo = -alpha(i), hi = c - alpha(i);
        if (s > 0) {
            lo = std::max(lo, alpha(j) - c);
            hi = std::min(hi, alpha(j));
        } else {
            lo = std::max(lo, -alpha(j));
            hi = std::min(hi, c - alpha(j));
        }
        delta = std::clamp(delta, lo, hi);
        if (delta == 0.0) {  // box-bound pair, no feasible progress
            converged = true;
            break;
        }

        alpha(i) += delta;
        alpha(j) -= s * delta;
        w.noalias() += delta * y(i) * X.row(i).transpose() - s * delta * y(j) * X.row(j).transpose();
        scores.noalias() = X * w;
        if (dual_trace) dual_trace->push_back(alpha.sum() - 0.5 * w.squaredNorm());
    }
    if (!converged)
        throw NoConvergence("iteration cap " + std::to_string(config.max_iterations) +
                            " reached, violating-pair gap " + std::to_string(gap));

    SvmModel model;
    model.w = std::move(w);
    model.c = c;
    model.b = bias;
    // Prefer interior support vectors for the bias; the midpoint above is
    // the fallback when every support vector sits on the box bound.
    double b_acc = 0.0;
    int b_count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (alpha(i) > 1e-9) model.support_indices.push_back(static_cast<int>(i));
        if (alpha(i) > 1e-9 && alpha(i) < c - 1e-9) {
            b_acc += y(i) - scores(i);
            ++b_count;
        }
    }
    if (b_count > 0) model.b = b_acc / b_count;
    model.objective = svm_primal_objective(X, y, model.w, model.b, c);
    return model;
}

double svm_decision(const SvmModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.w.size())
        throw DimensionMismatch("expected " + std::to_string(model.w.size()) + " features, got " +
                                std::to_string(x.size()));
    return model.w.dot(x) + model.b;
}

SvmLabel svm_predict(const SvmModel& model, const Eigen::VectorXd& x) {
    return svm_decision(model, x) >= 0 ? SvmLabel::cough : SvmLabel::non_cough;
}

}  // namespace coughdet
