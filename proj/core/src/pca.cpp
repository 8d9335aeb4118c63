#include "coughdet/pca.hpp"

#include <cmath>

#include "coughdet/errors.hpp"

namespace coughdet {

PcaModel fit_pca(const Eigen::MatrixXd& X, double variance_target) {
    const Eigen::Index m = X.rows();
    const Eigen::Index dim = X.cols();
    if (m < 2 || dim < 1) throw DegenerateData("need at least 2 samples and 1 dimension");
    if (!(variance_target > 0 && variance_target <= 1))
        throw ConfigInvalid("variance_target must be in (0,1]");

    PcaModel model;
    model.variance_target = variance_target;
    model.mean = X.colwise().mean();
    const Eigen::MatrixXd Xc = X.rowwise() - model.mean.transpose();

    const Eigen::Index n_eig = std::min(m, dim);
    Eigen::VectorXd eigenvalues(n_eig);
    Eigen::MatrixXd components(n_eig, dim);

    if (dim > m) {
        // Gram trick: the m x m Gram matrix shares the covariance's nonzero
        // spectrum, and eigenvectors map back through Xc.
        const Eigen::MatrixXd gram = (Xc * Xc.transpose()) / static_cast<double>(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        for (Eigen::Index i = 0; i < n_eig; ++i) {
            const Eigen::Index src = n_eig - 1 - i;  // solver sorts ascending
            eigenvalues(i) = std::max(solver.eigenvalues()(src), 0.0);
            Eigen::VectorXd v = Xc.transpose() * solver.eigenvectors().col(src);
            const double norm = v.norm();
            if (norm > 1e-150) v /= norm;
            components.row(i) = v.transpose();
        }
    } else {
        const Eigen::MatrixXd cov = (Xc.transpose() * Xc) / static_cast<double>(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        for (Eigen::Index i = 0; i < n_eig; ++i) {
            const Eigen::Index src = dim - 1 - i;
            eigenvalues(i) = std::max(solver.eigenvalues()(src), 0.0);
            components.row(i) = solver.eigenvectors().col(src).transpose();
        }
    }

    const double total = eigenvalues.sum();
    if (total <= 0) throw DegenerateData("zero covariance (all rows identical)");

    // Treat numerically-null directions as exact zeros so variance_target=1.0
    // resolves to the data rank.
    const double null_cut = eigenvalues(0) * 1e-12;
    for (Eigen::Index i = 0; i < n_eig; ++i)
        if (eigenvalues(i) < null_cut) eigenvalues(i) = 0.0;
    const double effective_total = eigenvalues.sum();

    int k = 0;
    double cum = 0.0;
    while (k < n_eig && cum / effective_total < variance_target - 1e-15) {
        cum += eigenvalues(k);
        ++k;
    }

    model.eigenvalues = eigenvalues;
    model.k = k;
    model.projection = components.topRows(k);
    // Sign convention: largest-magnitude entry of each eigenvector made
    // positive, so refits reproduce up to exact equality.
    for (int i = 0; i < k; ++i) {
        Eigen::Index imax = 0;
        model.projection.row(i).cwiseAbs().maxCoeff(&imax);
        if (model.projection(i, imax) < 0) model.projection.row(i) = -model.projection.row(i);
    }
    return model;
}

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.mean.size())
        throw DimensionMismatch("expected " + std::to_string(model.mean.size()) + ", got " +
                                std::to_string(x.size()));
    return model.projection * (x - model.mean);
}

Eigen::MatrixXd pca_transform_rows(const PcaModel& model, const Eigen::MatrixXd& X) {
    if (X.cols() != model.mean.size())
        throw DimensionMismatch("expected " + std::to_string(model.mean.size()) + " columns");
    return (X.rowwise() - model.mean.transpose()) * model.projection.transpose();
}

}  // namespace coughdet
