#include <benchmark/benchmark.h>

#include <random>

#include "coughdet/mfcc.hpp"
#include "coughdet/pls.hpp"
#include "coughdet/svm.hpp"
#include "coughdet/synth.hpp"

using namespace coughdet;

static void BM_ComputeMfcc(benchmark::State& state) {
    const AudioClip clip = synth_cough_clip(16000, 5.0, 42);
    const MfccConfig config;
    for (auto _ : state) {
        MfccMatrix m = compute_mfcc(clip, config);
        benchmark::DoNotOptimize(m.values.data());
    }
}
BENCHMARK(BM_ComputeMfcc);

static void BM_AppendDeltas(benchmark::State& state) {
    const AudioClip clip = synth_cough_clip(16000, 5.0, 42);
    const MfccMatrix m = compute_mfcc(clip, MfccConfig{});
    for (auto _ : state) {
        MfccMatrix d = append_deltas(m);
        benchmark::DoNotOptimize(d.values.data());
    }
}
BENCHMARK(BM_AppendDeltas);

static void BM_FitPls1(benchmark::State& state) {
    const auto n = state.range(0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(n, 107);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = gauss(rng);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = X(i, 0) + 0.5 * X(i, 1) + 0.1 * gauss(rng);
    for (auto _ : state) {
        PlsModel model = fit_pls1(X, y, 10);
        benchmark::DoNotOptimize(model.b.data());
    }
}
BENCHMARK(BM_FitPls1)->Arg(120)->Arg(400);

static void BM_FitSvm(benchmark::State& state) {
    const auto n = state.range(0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(n, 20);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i) = (i % 2 == 0) ? 1.0 : -1.0;
        for (Eigen::Index j = 0; j < 20; ++j) X(i, j) = gauss(rng) + y(i);
    }
    for (auto _ : state) {
        SvmModel model = fit_svm(X, y, SvmConfig{});
        benchmark::DoNotOptimize(model.w.data());
    }
}
BENCHMARK(BM_FitSvm)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
