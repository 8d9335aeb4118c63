#include <doctest.h>

#include <cmath>

#include "coughdet/errors.hpp"
#include "coughdet/metrics.hpp"

using namespace coughdet;

TEST_CASE("confusion counts with cough positive") {
    const std::vector<Label> truth = {Label::cough, Label::cough, Label::cough,
                                      Label::non_cough, Label::non_cough};
    const ConfusionMatrix perfect = confusion(truth, truth);
    CHECK(perfect.tp == 3);
    CHECK(perfect.fn == 0);
    CHECK(perfect.fp == 0);
    CHECK(perfect.tn == 2);

    const std::vector<Label> constant = {Label::cough, Label::cough};
    const std::vector<Label> mixed = {Label::cough, Label::non_cough};
    const ConfusionMatrix cm = confusion(constant, mixed);
    CHECK(cm.tp == 1);
    CHECK(cm.fn == 0);
    CHECK(cm.fp == 1);
    CHECK(cm.tn == 0);

    CHECK_THROWS_AS(confusion(constant, truth), LengthMismatch);
    CHECK_THROWS_AS(confusion({}, {}), EmptyInput);
}

TEST_CASE("the (67, 2, 5, 64) matrix reproduces the reference row") {
    const MetricsRow row = compute_metrics({67, 2, 5, 64});
    CHECK(std::abs(row.accuracy - 94.93) < 0.005);
    CHECK(std::abs(row.recall - 97.10) < 0.005);
    CHECK(std::abs(row.precision - 93.06) < 0.005);
    CHECK(std::abs(row.f1 - 0.95) < 0.005);
}

TEST_CASE("zero denominators become NaN markers, never zero") {
    const MetricsRow row = compute_metrics({0, 0, 0, 10});
    CHECK(row.accuracy == 100.0);
    CHECK(std::isnan(row.recall));
    CHECK(std::isnan(row.precision));
    CHECK(std::isnan(row.f1));
    CHECK_THROWS_AS(compute_metrics({0, 0, 0, 0}), EmptyInput);
}

TEST_CASE("symmetric half-right case") {
    const MetricsRow row = compute_metrics({1, 1, 1, 1});
    CHECK(row.accuracy == 50.0);
    CHECK(row.recall == 50.0);
    CHECK(row.precision == 50.0);
    CHECK(row.f1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("metric ranges and degenerate-F1 policy") {
    for (long tp = 0; tp <= 3; ++tp)
        for (long fn = 0; fn <= 3; ++fn)
            for (long fp = 0; fp <= 3; ++fp)
                for (long tn = 0; tn <= 3; ++tn) {
                    if (tp + fn + fp + tn == 0) continue;
                    const MetricsRow r = compute_metrics({tp, fn, fp, tn});
                    REQUIRE(r.accuracy >= 0.0);
                    REQUIRE(r.accuracy <= 100.0);
                    if (!std::isnan(r.recall)) REQUIRE(r.recall <= 100.0);
                    if (!std::isnan(r.precision)) REQUIRE(r.precision <= 100.0);
                    if (!std::isnan(r.f1)) {
                        REQUIRE(r.f1 >= 0.0);
                        REQUIRE(r.f1 <= 1.0);
                    }
                }
}

TEST_CASE("single-row report is flagged best") {
    MetricsRow row = compute_metrics({5, 0, 0, 5});
    row.method = "pca";
    row.k = 30;
    const Report report = render_report({row});
    CHECK(report.best_row == 0);
    CHECK(report.text.find("<- best") != std::string::npos);
    CHECK(report.csv.find("pca,30,") != std::string::npos);
}

TEST_CASE("accuracy ties break on F1, then on smaller k") {
    MetricsRow a = compute_metrics({6, 2, 2, 6});   // 75%, balanced
    MetricsRow b = compute_metrics({7, 1, 3, 5});   // 75%, higher recall/F1
    a.method = "uve";
    a.k = 10;
    b.method = "uve";
    b.k = 20;
    REQUIRE(a.accuracy == b.accuracy);
    REQUIRE(b.f1 > a.f1);
    CHECK(render_report({a, b}).best_row == 1);

    MetricsRow c = a;
    c.k = 30;
    CHECK(render_report({a, c}).best_row == 0);  // equal metrics: smaller k
}

TEST_CASE("report groups by method and sorts by k within groups") {
    auto row = [](const std::string& method, int k, long tp) {
        MetricsRow r = compute_metrics({tp, 10 - tp, 1, 9});
        r.method = method;
        r.k = k;
        return r;
    };
    const std::vector<MetricsRow> rows = {row("pca", 60, 5),  row("vip", 30, 6),
                                          row("uve", 20, 9),  row("uve", 10, 7),
                                          row("vip", 10, 6),  row("random_frog", 10, 8)};
    const Report report = render_report(rows);

    // Method blocks keep first-appearance order; k ascends inside each block.
    const auto pca = report.csv.find("\npca,");
    const auto vip10 = report.csv.find("\nvip,10,");
    const auto vip30 = report.csv.find("\nvip,30,");
    const auto uve10 = report.csv.find("\nuve,10,");
    const auto uve20 = report.csv.find("\nuve,20,");
    const auto frog = report.csv.find("\nrandom_frog,10,");
    REQUIRE(pca != std::string::npos);
    REQUIRE(vip10 != std::string::npos);
    CHECK(pca < vip10);
    CHECK(vip10 < vip30);
    CHECK(vip30 < uve10);
    CHECK(uve10 < uve20);
    CHECK(uve20 < frog);

    // Best row: uve/k=20 has the top accuracy.
    CHECK(report.text.find("<- best") != std::string::npos);
    const auto best_line_start = report.text.rfind('\n', report.text.find("<- best"));
    CHECK(report.text.compare(best_line_start + 1, 3, "uve") == 0);
}

TEST_CASE("failed rows render with their error and empty CSV metrics") {
    MetricsRow ok = compute_metrics({5, 0, 0, 5});
    ok.method = "pca";
    ok.k = 40;
    MetricsRow bad;
    bad.method = "vip";
    bad.k = 50;
    bad.failed = true;
    bad.error = "KExceedsRelevant: k=50";
    const Report report = render_report({ok, bad});
    CHECK(report.text.find("FAILED: KExceedsRelevant") != std::string::npos);
    CHECK(report.csv.find("vip,50,,,,") != std::string::npos);
    // The failed row can never be flagged best.
    CHECK(report.best_row == 0);
    CHECK_THROWS_AS(render_report({}), EmptyInput);
}
