// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "pptsep/kernels.hpp"

using namespace pptsep;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(nd(gen), nd(gen));
    return m;
}

TripartiteDims dims_for(const benchmark::State &state) {
    const int k = static_cast<int>(state.range(0));
    return {k, k, static_cast<int>(state.range(1))};
}

template <Matrix (*Kernel)(const Matrix &, const TripartiteDims &, SubsystemMask)>
void BM_PartialTranspose(benchmark::State &state) {
    const auto d = dims_for(state);
    const Matrix rho = random_matrix(d.side(), d.side(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(rho, d, {true, false, true}));
}

template <Matrix (*Kernel)(const Matrix &, const TripartiteDims &, const Matrix &)>
void BM_ConjugateC(benchmark::State &state) {
    const auto d = dims_for(state);
    const Matrix rho = random_matrix(d.side(), d.side(), 2);
    const Matrix W = random_matrix(d.N, d.N, 3);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(rho, d, W));
}

template <Matrix (*Kernel)(std::span<const Matrix>)>
void BM_BlockRowGram(benchmark::State &state) {
    const auto d = dims_for(state);
    std::vector<Matrix> blocks;
    for (int i = 0; i < d.ab(); ++i) blocks.push_back(random_matrix(d.N, d.N, 10 + static_cast<std::uint64_t>(i)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(blocks));
}

template <Matrix (*Kernel)(std::span<const kernels::ProductTerm>, const TripartiteDims &)>
void BM_Reconstruct(benchmark::State &state) {
    const auto d = dims_for(state);
    std::vector<kernels::ProductTerm> terms;
    for (int n = 0; n < d.N; ++n)
        terms.push_back({1.0 / d.N, random_matrix(d.K, 1, 20 + static_cast<std::uint64_t>(n)).col(0),
                         random_matrix(d.M, 1, 40 + static_cast<std::uint64_t>(n)).col(0),
                         random_matrix(d.N, 1, 60 + static_cast<std::uint64_t>(n)).col(0)});
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(terms, d));
}

void sizes(benchmark::internal::Benchmark *b) {
    b->Args({2, 2})->Args({4, 3})->Args({4, 8})->Args({6, 8})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_PartialTranspose<kernels::serial::partial_transpose>)->Name("partial_transpose/serial")->Apply(sizes);
BENCHMARK(BM_PartialTranspose<kernels::parallel::partial_transpose>)->Name("partial_transpose/parallel")->Apply(sizes);
BENCHMARK(BM_ConjugateC<kernels::serial::conjugate_c>)->Name("conjugate_c/serial")->Apply(sizes);
BENCHMARK(BM_ConjugateC<kernels::parallel::conjugate_c>)->Name("conjugate_c/parallel")->Apply(sizes);
BENCHMARK(BM_BlockRowGram<kernels::serial::block_row_gram>)->Name("block_row_gram/serial")->Apply(sizes);
BENCHMARK(BM_BlockRowGram<kernels::parallel::block_row_gram>)->Name("block_row_gram/parallel")->Apply(sizes);
BENCHMARK(BM_Reconstruct<kernels::serial::reconstruct>)->Name("reconstruct/serial")->Apply(sizes);
BENCHMARK(BM_Reconstruct<kernels::parallel::reconstruct>)->Name("reconstruct/parallel")->Apply(sizes);

BENCHMARK_MAIN();
