#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace coughdet {

enum class SelectorMethod { random_frog, uve, vip };

std::string to_string(SelectorMethod m);

struct SelectorConfig {
    int n_components = 10;  // PLS components, capped at min(n-1, p)
    int folds = 5;
    // Random Frog
    int n_iterations = 1000;
    int q0 = 10;
    double theta = 0.3;
    double eta = 0.1;
    // UVE
    int n_noise = -1;  // -1: one artificial column per original
    // Strict mode errors when k exceeds the count of features above the
    // relevance threshold; the default ranks all features and takes top-k.
    bool vip_strict = false;
};

struct SelectionResult {
    SelectorMethod method = SelectorMethod::uve;
    Eigen::VectorXd importance;     // p; probability | |c_j| | VIP score
    std::vector<int> selected;      // sorted ascending, size k
    SelectorConfig config_echo;
    std::uint64_t seed = 0;
    // UVE cutoff diagnostics: originals whose |c_j| exceeds max |c_noise|.
    std::vector<int> above_noise_cutoff;
    // VIP: set when a selected feature falls below the relevance threshold 1.
    bool below_threshold_warning = false;
};

/// k indices of largest importance, ties to the lower index, sorted ascending.
std::vector<int> take_top_k(const Eigen::VectorXd& importance, int k);
std::vector<int> take_top_k(const SelectionResult& result, int k);

SelectionResult select_uve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                           const SelectorConfig& config, std::uint64_t seed);

SelectionResult select_vip(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                           const SelectorConfig& config);

SelectionResult select_random_frog(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                                   const SelectorConfig& config, std::uint64_t seed);

/// Importance-plot export: `feature_index,importance,selected` CSV text.
std::string importance_csv(const SelectionResult& result);

}  // namespace coughdet
