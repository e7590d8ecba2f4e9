#include <benchmark/benchmark.h>

#include "bmlab/basis.hpp"
#include "bmlab/chaos.hpp"
#include "bmlab/covariance.hpp"
#include "bmlab/hermite.hpp"
#include "bmlab/sampler.hpp"

using namespace bmlab;

namespace {

cov::CovarianceModel nn_model_2d() {
    cov::CovarianceModel::Table t;
    t[{0, 0}] = 1.0;
    t[{1, 0}] = 0.12;
    t[{0, 1}] = 0.12;
    return cov::CovarianceModel::finite_support(2, t);
}

void BM_hermite_window_sums(benchmark::State& state) {
    const auto model = cov::CovarianceModel::delta(2);
    const auto field = sampler::sample_stationary(model, 68, 1, 0);
    sampler::Window w;
    w.N = 33;
    const auto window = sampler::extract_window(field, w);
    hermite::HermiteExpansion e;
    e.variance_base = 1.0;
    e.c = {0.0, 0.0, 1.0, 0.0, 0.5};
    const auto f = chaos::TestFunction::constant_one().tabulate(2, 33);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chaos::window_sums(window, e, f));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(window.size()));
}
BENCHMARK(BM_hermite_window_sums);

void BM_torus_sample_d2(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    sampler::TorusSampler s(nn_model_2d(), M);
    std::uint64_t r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.sample(7, r++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(M) * M);
}
BENCHMARK(BM_torus_sample_d2)->Arg(36)->Arg(68)->Arg(132);

void BM_gff_sample_d3(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    sampler::GffSampler s(3, M);
    std::uint64_t r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.sample(7, r++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(M) * M * M);
}
BENCHMARK(BM_gff_sample_d3)->Arg(32)->Arg(64);

void BM_exact_variance_d2(benchmark::State& state) {
    const auto model = nn_model_2d();
    const auto f = chaos::TestFunction::eigenfunction({1, 1});
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(chaos::exact_variance(2, 1.0, model, f, N, 2));
    }
}
BENCHMARK(BM_exact_variance_d2)->Arg(17)->Arg(33)->Arg(65);

void BM_contraction_norm(benchmark::State& state) {
    cov::CovarianceModel::Table t;
    t[{0}] = 1.0;
    t[{1}] = 0.3;
    t[{2}] = 0.1;
    const auto model = cov::CovarianceModel::finite_support(1, t);
    const auto f = chaos::TestFunction::constant_one();
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(chaos::contraction_norm_sq(3, 1, 1.0, model, f, N, 1));
    }
}
BENCHMARK(BM_contraction_norm)->Arg(9)->Arg(17);

void BM_sobolev_projection(benchmark::State& state) {
    const auto model = cov::CovarianceModel::delta(2);
    const auto field = sampler::sample_stationary(model, 68, 1, 0);
    sampler::Window w;
    w.N = 33;
    const auto window = sampler::extract_window(field, w);
    hermite::HermiteExpansion e;
    e.variance_base = 1.0;
    e.c = {0.0, 0.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(basis::project_all(window, e, 33, 2, 1.5, 8));
    }
}
BENCHMARK(BM_sobolev_projection);

}  // namespace

BENCHMARK_MAIN();
