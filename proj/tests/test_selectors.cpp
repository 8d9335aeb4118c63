#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "coughdet/errors.hpp"
#include "coughdet/pls.hpp"
#include "coughdet/selectors.hpp"
#include "test_util.hpp"

using namespace coughdet;

namespace {

int overlap(const std::vector<int>& selected, const std::vector<int>& truth) {
    const std::set<int> s(selected.begin(), selected.end());
    int hits = 0;
    for (const int j : truth) hits += s.count(j) ? 1 : 0;
    return hits;
}

}  // namespace

TEST_CASE("take_top_k sorts by importance with lower-index ties") {
    Eigen::VectorXd imp(3);
    imp << 0.1, 0.9, 0.5;
    CHECK(take_top_k(imp, 2) == std::vector<int>{1, 2});
    CHECK(take_top_k(Eigen::VectorXd::Ones(4), 2) == std::vector<int>{0, 1});
    CHECK(take_top_k(imp, 3) == std::vector<int>{0, 1, 2});
    CHECK_THROWS_AS(take_top_k(imp, 0), KOutOfRange);
    CHECK_THROWS_AS(take_top_k(imp, 4), KOutOfRange);
}

TEST_CASE("uve picks the single informative column") {
    auto data = testutil::make_regression(30, 8, 1, 1e9, 11);
    data.y = data.X.col(3);  // exact dependence on column 3 only
    SelectorConfig config;
    config.n_components = 4;
    const SelectionResult r = select_uve(data.X, data.y, 1, config, 5);
    CHECK(r.selected == std::vector<int>{3});
    CHECK(r.method == SelectorMethod::uve);
    REQUIRE(r.importance.size() == 8);
    for (int j = 0; j < 8; ++j)
        if (j != 3) REQUIRE(r.importance(3) > r.importance(j));
}

TEST_CASE("uve is deterministic and invariant to y rescaling") {
    const auto data = testutil::make_regression(60, 30, 6, 10.0, 21);
    SelectorConfig config;
    const SelectionResult a = select_uve(data.X, data.y, 10, config, 9);
    const SelectionResult b = select_uve(data.X, data.y, 10, config, 9);
    CHECK(a.selected == b.selected);
    CHECK((a.importance.array() == b.importance.array()).all());

    const SelectionResult scaled = select_uve(data.X, 10.0 * data.y, 10, config, 9);
    CHECK(scaled.selected == a.selected);
    CHECK((scaled.importance - a.importance).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("uve recovers most informative features at SNR 10") {
    const auto data = testutil::make_regression(120, 107, 20, 10.0, 31);
    SelectorConfig config;
    const SelectionResult r = select_uve(data.X, data.y, 20, config, 1);
    CHECK(overlap(r.selected, data.informative) >= 18);
}

TEST_CASE("vip reproduces the hand-computed two-variable case") {
    // One component whose weight is entirely on the first variable:
    // y depends only on x0, x1 is orthogonal noise with no y-correlation.
    Eigen::MatrixXd X(4, 2);
    X << 1, 1, -1, 1, 1, -1, -1, -1;
    Eigen::VectorXd y(4);
    y << 1, -1, 1, -1;
    SelectorConfig config;
    config.n_components = 1;
    const SelectionResult r = select_vip(X, y, 1, config);
    CHECK(r.importance(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.importance(1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(r.selected == std::vector<int>{0});
}

TEST_CASE("mean squared VIP equals one for assorted fits") {
    for (const std::uint64_t seed : {41ULL, 42ULL, 43ULL}) {
        const auto data = testutil::make_regression(50, 15, 5, 8.0, seed);
        SelectorConfig config;
        config.n_components = 6;
        const SelectionResult r = select_vip(data.X, data.y, 5, config);
        CHECK(r.importance.array().square().mean() == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("vip top-k sets nest") {
    const auto data = testutil::make_regression(80, 40, 10, 10.0, 51);
    SelectorConfig config;
    const SelectionResult r10 = select_vip(data.X, data.y, 10, config);
    const SelectionResult r20 = select_vip(data.X, data.y, 20, config);
    const std::set<int> big(r20.selected.begin(), r20.selected.end());
    for (const int j : r10.selected) REQUIRE(big.count(j) == 1);
}

TEST_CASE("vip strict mode enforces the relevance threshold") {
    const auto data = testutil::make_regression(60, 30, 3, 50.0, 61);
    SelectorConfig config;
    config.vip_strict = true;
    // Only a handful of features can sit above VIP=1 when 3 carry the signal.
    CHECK_THROWS_AS(select_vip(data.X, data.y, 29, config), KExceedsRelevant);

    config.vip_strict = false;
    const SelectionResult relaxed = select_vip(data.X, data.y, 29, config);
    CHECK(relaxed.below_threshold_warning);
    const SelectionResult tight = select_vip(data.X, data.y, 2, config);
    CHECK_FALSE(tight.below_threshold_warning);
}

TEST_CASE("random frog with a full starting subset keeps probability one") {
    const auto data = testutil::make_regression(30, 10, 3, 10.0, 71);
    SelectorConfig config;
    config.n_iterations = 1;
    config.q0 = 10;  // the whole feature set
    config.n_components = 5;
    const SelectionResult r = select_random_frog(data.X, data.y, 4, config, 3);
    REQUIRE(r.importance.size() == 10);
    for (int j = 0; j < 10; ++j) REQUIRE(r.importance(j) == 1.0);
}

TEST_CASE("random frog is reproducible and its probabilities are bounded") {
    const auto data = testutil::make_regression(50, 20, 5, 10.0, 81);
    SelectorConfig config;
    config.n_iterations = 120;
    config.q0 = 5;
    const SelectionResult a = select_random_frog(data.X, data.y, 5, config, 17);
    const SelectionResult b = select_random_frog(data.X, data.y, 5, config, 17);
    CHECK((a.importance.array() == b.importance.array()).all());
    CHECK(a.selected == b.selected);
    for (int j = 0; j < 20; ++j) {
        REQUIRE(a.importance(j) >= 0.0);
        REQUIRE(a.importance(j) <= 1.0);
    }
    const SelectionResult c = select_random_frog(data.X, data.y, 5, config, 18);
    CHECK_FALSE((c.importance.array() == a.importance.array()).all());
}

TEST_CASE("random frog favors informative features") {
    const auto data = testutil::make_regression(120, 107, 20, 10.0, 91);
    SelectorConfig config;
    config.n_iterations = 300;
    config.q0 = 20;
    const SelectionResult r = select_random_frog(data.X, data.y, 20, config, 7);
    double info = 0.0, noise = 0.0;
    const std::set<int> truth(data.informative.begin(), data.informative.end());
    for (int j = 0; j < 107; ++j)
        (truth.count(j) ? info : noise) += r.importance(j);
    info /= static_cast<double>(truth.size());
    noise /= static_cast<double>(107 - truth.size());
    CHECK(info > noise);
}

TEST_CASE("selector configuration is validated") {
    const auto data = testutil::make_regression(30, 10, 3, 10.0, 101);
    SelectorConfig config;
    config.q0 = 0;
    CHECK_THROWS_AS(select_random_frog(data.X, data.y, 3, config, 0), ConfigInvalid);
    config.q0 = 5;
    config.n_iterations = 0;
    CHECK_THROWS_AS(select_random_frog(data.X, data.y, 3, config, 0), ConfigInvalid);
    config.n_iterations = 10;
    config.eta = -0.5;
    CHECK_THROWS_AS(select_random_frog(data.X, data.y, 3, config, 0), ConfigInvalid);

    SelectorConfig ok;
    CHECK_THROWS_AS(select_uve(data.X, data.y, 11, ok, 0), KOutOfRange);
    CHECK_THROWS_AS(select_vip(data.X, data.y, 0, ok), KOutOfRange);
}

TEST_CASE("importance export is a parseable CSV") {
    const auto data = testutil::make_regression(30, 6, 2, 10.0, 111);
    SelectorConfig config;
    config.n_components = 4;
    const SelectionResult r = select_vip(data.X, data.y, 2, config);
    const std::string csv = importance_csv(r);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "feature_index,importance,selected");
    int rows = 0, selected = 0;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        REQUIRE(first != std::string::npos);
        REQUIRE(second != std::string::npos);
        CHECK(std::stoi(line.substr(0, first)) == rows);
        selected += line.substr(second + 1) == "1" ? 1 : 0;
        ++rows;
    }
    CHECK(rows == 6);
    CHECK(selected == 2);
}
