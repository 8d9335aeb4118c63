#include "coughdet/pls.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "coughdet/errors.hpp"

namespace coughdet {

namespace {
constexpr double kDegenerateNorm = 1e-12;
}

PlsModel fit_pls1(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int n_components) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n < 2) throw DegenerateData("need at least 2 samples");
    if (y.size() != n) throw DimensionMismatch("y length != sample count");
    if (n_components < 1 || n_components > std::min<Eigen::Index>(n - 1, p))
        throw ConfigInvalid("component count out of range");

    PlsModel model;
    model.x_mean = X.colwise().mean();
    model.y_mean = y.mean();

    Eigen::MatrixXd Xd = X.rowwise() - model.x_mean.transpose();
    Eigen::VectorXd yd = y.array() - model.y_mean;
    if (yd.cwiseAbs().maxCoeff() < kDegenerateNorm) throw ConstantTarget("y is constant");

    model.weights.resize(p, n_components);
    model.loadings.resize(p, n_components);
    model.y_loadings.resize(n_components);
    model.ssy_per_component.resize(n_components);
    model.scores.resize(n, n_components);

    int a = 0;
    for (; a < n_components; ++a) {
        Eigen::VectorXd w = Xd.transpose() * yd;
        const double wnorm = w.norm();
        if (wnorm < kDegenerateNorm) break;  // degenerate direction, stop early
        w /= wnorm;
        const Eigen::VectorXd t = Xd * w;
        const double tt = t.squaredNorm();
        if (tt < kDegenerateNorm) break;
        const Eigen::VectorXd pl = Xd.transpose() * t / tt;
        const double q = yd.dot(t) / tt;

        model.weights.col(a) = w;
        model.scores.col(a) = t;
        model.loadings.col(a) = pl;
        model.y_loadings(a) = q;
        model.ssy_per_component(a) = q * q * tt;

        Xd.noalias() -= t * pl.transpose();
        yd.noalias() -= q * t;
    }
    if (a == 0) throw ConstantTarget("no usable component (X carries no signal for y)");

    model.n_components = a;
    model.weights.conservativeResize(p, a);
    model.loadings.conservativeResize(p, a);
    model.y_loadings.conservativeResize(a);
    model.ssy_per_component.conservativeResize(a);
    model.scores.conservativeResize(n, a);
    model.ssy_cum = model.ssy_per_component.sum();

    // b = W (P^T W)^-1 q, composed from the deflation history.
    const Eigen::MatrixXd pw = model.loadings.transpose() * model.weights;
    model.b = model.weights * pw.triangularView<Eigen::Upper>().solve(model.y_loadings);
    return model;
}

Eigen::VectorXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& X) {
    if (X.cols() != model.b.size())
        throw DimensionMismatch("expected " + std::to_string(model.b.size()) + " columns, got " +
                                std::to_string(X.cols()));
    return ((X.rowwise() - model.x_mean.transpose()) * model.b).array() + model.y_mean;
}

Eigen::MatrixXd loo_coefficients(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 int n_components) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n < 3) throw DegenerateData("leave-one-out needs at least 3 samples");

    Eigen::MatrixXd coeffs(n, p);
    Eigen::MatrixXd Xi(n - 1, p);
    Eigen::VectorXd yi(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        Xi.topRows(i) = X.topRows(i);
        Xi.bottomRows(n - 1 - i) = X.bottomRows(n - 1 - i);
        yi.head(i) = y.head(i);
        yi.tail(n - 1 - i) = y.tail(n - 1 - i);
        const int a = std::min<int>(n_components, static_cast<int>(std::min<Eigen::Index>(n - 2, p)));
        coeffs.row(i) = fit_pls1(Xi, yi, a).b.transpose();
    }
    return coeffs;
}

double cv_rmse(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int n_components, int folds,
               std::uint64_t seed) {
    const Eigen::Index n = X.rows();
    if (folds < 2) throw ConfigInvalid("need at least 2 folds");
    if (n < folds) throw DegenerateData("fewer samples than folds");

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    double sse = 0.0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> hold, keep;
        for (Eigen::Index i = 0; i < n; ++i)
            (static_cast<int>(i % folds) == f ? hold : keep).push_back(order[i]);

        Eigen::MatrixXd Xtr(keep.size(), X.cols());
        Eigen::VectorXd ytr(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            Xtr.row(i) = X.row(keep[i]);
            ytr(i) = y(keep[i]);
        }
        const int a = std::min<int>(
            n_components, static_cast<int>(std::min<Eigen::Index>(Xtr.rows() - 1, X.cols())));
        const PlsModel model = fit_pls1(Xtr, ytr, a);
        for (const auto idx : hold) {
            const double pred = pls_predict(model, X.row(idx))(0);
            sse += (pred - y(idx)) * (pred - y(idx));
        }
    }
    return std::sqrt(sse / static_cast<double>(n));
}

}  // namespace coughdet
