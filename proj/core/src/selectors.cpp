#include "coughdet/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "coughdet/errors.hpp"
#include "coughdet/pls.hpp"

namespace coughdet {

std::string to_string(SelectorMethod m) {
    switch (m) {
        case SelectorMethod::random_frog: return "random_frog";
        case SelectorMethod::uve: return "uve";
        case SelectorMethod::vip: return "vip";
    }
    return "?";
}

std::vector<int> take_top_k(const Eigen::VectorXd& importance, int k) {
    const int p = static_cast<int>(importance.size());
    if (k < 1 || k > p) throw KOutOfRange("k=" + std::to_string(k) + ", p=" + std::to_string(p));
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return importance(a) > importance(b); });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

std::vector<int> take_top_k(const SelectionResult& result, int k) {
    return take_top_k(result.importance, k);
}

namespace {

int capped_components(int requested, Eigen::Index n, Eigen::Index p) {
    return std::max(1, std::min<int>(requested, static_cast<int>(std::min(n - 1, p))));
}

Eigen::MatrixXd columns(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(idx[j]);
    return out;
}

}  // namespace

SelectionResult select_uve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                           const SelectorConfig& config, std::uint64_t seed) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (k < 1 || k > p) throw KOutOfRange("k=" + std::to_string(k));
    if (n < 3) throw DegenerateData("leave-one-out needs at least 3 samples");

    const Eigen::Index n_noise = config.n_noise < 0 ? p : config.n_noise;
    Eigen::MatrixXd aug(n, p + n_noise);
    aug.leftCols(p) = X;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    // Artificial variables carry no information; the tiny scale keeps them
    // from perturbing the fit on the real columns.
    for (Eigen::Index j = 0; j < n_noise; ++j)
        for (Eigen::Index i = 0; i < n; ++i) aug(i, p + j) = uni(rng) * 1e-10;

    const int a = capped_components(config.n_components, n - 1, aug.cols());
    const Eigen::MatrixXd coeffs = loo_coefficients(aug, y, a);

    Eigen::VectorXd reliability(aug.cols());
    for (Eigen::Index j = 0; j < aug.cols(); ++j) {
        const double mean = coeffs.col(j).mean();
        const double ss = (coeffs.col(j).array() - mean).square().sum();
        const double jack_sd =
            std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
        reliability(j) = mean / std::max(jack_sd, 1e-30);
    }

    SelectionResult result;
    result.method = SelectorMethod::uve;
    result.config_echo = config;
    result.seed = seed;
    result.importance = reliability.head(p).cwiseAbs();
    result.selected = take_top_k(result.importance, k);
    const double noise_cut =
        n_noise > 0 ? reliability.tail(n_noise).cwiseAbs().maxCoeff() : 0.0;
    for (int j = 0; j < p; ++j)
        if (result.importance(j) > noise_cut) result.above_noise_cutoff.push_back(j);
    return result;
}

SelectionResult select_vip(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                           const SelectorConfig& config) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (k < 1 || k > p) throw KOutOfRange("k=" + std::to_string(k));

    const int a = capped_components(config.n_components, n, p);
    const PlsModel model = fit_pls1(X, y, a);

    Eigen::VectorXd vip(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double acc = 0.0;
        for (int c = 0; c < model.n_components; ++c)
            acc += model.weights(j, c) * model.weights(j, c) * model.ssy_per_component(c);
        vip(j) = std::sqrt(static_cast<double>(p) * acc / model.ssy_cum);
    }

    if (config.vip_strict) {
        const auto relevant = (vip.array() > 1.0).count();
        if (k > relevant)
            throw KExceedsRelevant("k=" + std::to_string(k) + " but only " +
                                   std::to_string(relevant) + " features have VIP > 1");
    }

    SelectionResult result;
    result.method = SelectorMethod::vip;
    result.config_echo = config;
    result.importance = vip;
    result.selected = take_top_k(vip, k);
    for (int j : result.selected)
        if (vip(j) < 1.0) result.below_threshold_warning = true;
    return result;
}

SelectionResult select_random_frog(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                                   const SelectorConfig& config, std::uint64_t seed) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (k < 1 || k > p) throw KOutOfRange("k=" + std::to_string(k));
    if (config.q0 < 1 || config.q0 > p) throw ConfigInvalid("q0 out of [1, p]");
    if (config.n_iterations < 1) throw ConfigInvalid("need at least one iteration");
    if (config.theta <= 0) throw ConfigInvalid("theta must be positive");
    if (!(config.eta > 0 && config.eta <= 1)) throw ConfigInvalid("eta must be in (0, 1]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    auto random_subset = [&](std::vector<int> pool, std::size_t count) {
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(count);
        return pool;
    };
    auto subset_rmse = [&](const std::vector<int>& idx, std::uint64_t fold_seed) {
        const int a = capped_components(config.n_components, n, static_cast<Eigen::Index>(idx.size()));
        try {
            return cv_rmse(columns(X, idx), y, a, config.folds, fold_seed);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    auto best_by_coefficient = [&](const std::vector<int>& idx, std::size_t count) {
        const int a = capped_components(config.n_components, n, static_cast<Eigen::Index>(idx.size()));
        Eigen::VectorXd score;
        try {
            score = fit_pls1(columns(X, idx), y, a).b.cwiseAbs();
        } catch (const Error&) {
            score = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
        }
        const auto top = take_top_k(score, static_cast<int>(count));
        std::vector<int> kept;
        kept.reserve(count);
        for (int t : top) kept.push_back(idx[t]);
        std::sort(kept.begin(), kept.end());
        return kept;
    };

    std::vector<int> all(p);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> current = random_subset(all, static_cast<std::size_t>(config.q0));
    std::sort(current.begin(), current.end());
    double current_rmse = subset_rmse(current, rng());

    Eigen::VectorXd counts = Eigen::VectorXd::Zero(p);
    for (int iter = 0; iter < config.n_iterations; ++iter) {
        for (int j : current) counts(j) += 1.0;

        const auto q = static_cast<double>(current.size());
        std::normal_distribution<double> qdist(q, config.theta * q);
        const auto qstar = static_cast<Eigen::Index>(
            std::clamp<long>(std::lround(std::abs(qdist(rng))), 1L, static_cast<long>(p)));

        std::vector<int> candidate;
        if (qstar == static_cast<Eigen::Index>(current.size())) {
            candidate = current;
        } else if (qstar < static_cast<Eigen::Index>(current.size())) {
            candidate = best_by_coefficient(current, static_cast<std::size_t>(qstar));
        } else {
            std::vector<int> outside;
            std::vector<char> in(p, 0);
            for (int j : current) in[j] = 1;
            for (int j = 0; j < p; ++j)
                if (!in[j]) outside.push_back(j);
            const auto extra =
                random_subset(outside, static_cast<std::size_t>(qstar) - current.size());
            candidate = current;
            candidate.insert(candidate.end(), extra.begin(), extra.end());
            candidate = best_by_coefficient(candidate, static_cast<std::size_t>(qstar));
        }

        const double cand_rmse = subset_rmse(candidate, rng());
        bool accept = cand_rmse <= current_rmse;
        if (!accept && std::isfinite(cand_rmse)) {
            const double prob = config.eta * (current_rmse / cand_rmse);
            accept = uni(rng) < prob;
        } else if (!accept) {
            uni(rng);  // keep the draw count independent of the branch
        }
        if (accept) {
            current = std::move(candidate);
            current_rmse = cand_rmse;
        }
    }

    SelectionResult result;
    result.method = SelectorMethod::random_frog;
    result.config_echo = config;
    result.seed = seed;
    result.importance = counts / static_cast<double>(config.n_iterations);
    result.selected = take_top_k(result.importance, k);
    return result;
}

std::string importance_csv(const SelectionResult& result) {
    std::ostringstream out;
    out << "feature_index,importance,selected\n";
    std::vector<char> is_selected(result.importance.size(), 0);
    for (int j : result.selected) is_selected[j] = 1;
    out.precision(17);
    for (Eigen::Index j = 0; j < result.importance.size(); ++j)
        out << j << ',' << result.importance(j) << ',' << int(is_selected[j]) << '\n';
    return out.str();
}

}  // namespace coughdet
