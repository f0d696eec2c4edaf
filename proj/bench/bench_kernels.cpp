// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <complex>
#include <map>
#include <random>

#include "penta/echelon.hpp"
#include "penta/kernels.hpp"
#include "penta/mlvnum.hpp"

using namespace penta;

namespace {

Series dense_series(int N, int D, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9);
  auto a = alphabet_fn1(N);
  Series s(a, D);
  // every word of degree <= D
  std::vector<Word> layer{{}};
  for (int d = 0; d <= D; ++d) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      s.add(w, Q(num(rng), 1 + d));
      for (int l = 0; l < a->size(); ++l) {
        Word x = w;
        x.push_back(static_cast<Letter>(l));
        next.push_back(std::move(x));
      }
    }
    layer = std::move(next);
  }
  return s;
}

std::vector<SparseRow> random_rows(int n, int ncols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> col(0, ncols - 1), num(-4, 4), len(1, 10);
  std::vector<SparseRow> rows;
  for (int i = 0; i < n; ++i) {
    std::map<std::uint64_t, Rational> m;
    for (int k = len(rng); k > 0; --k) m[col(rng)] += num(rng);
    SparseRow r;
    for (auto& [c, v] : m)
      if (sgn(v)) {
        r.cols.push_back(c);
        r.vals.push_back(v);
      }
    if (!r.empty()) rows.push_back(std::move(r));
  }
  return rows;
}

void BM_concat_serial(benchmark::State& st) {
  Series a = dense_series(2, st.range(0), 1), b = dense_series(2, st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::concat_mul_serial(a, b));
}
void BM_concat_omp(benchmark::State& st) {
  Series a = dense_series(2, st.range(0), 1), b = dense_series(2, st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::concat_mul_omp(a, b));
}

void BM_echelon_serial(benchmark::State& st) {
  auto rows = random_rows(st.range(0), st.range(0) / 2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(echelon_serial(rows));
}
void BM_echelon_omp(benchmark::State& st) {
  auto rows = random_rows(st.range(0), st.range(0) / 2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(echelon_omp(rows));
}

std::vector<std::complex<double>> kz_state(int N, int W) {
  std::size_t n = 0, p = 1;
  for (int d = 0; d <= W; ++d, p *= N + 1) n += p;
  std::vector<std::complex<double>> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = {1.0 / (1 + i), 0.5 / (2 + i)};
  return h;
}

void BM_kz_rhs_serial(benchmark::State& st) {
  const int W = st.range(0);
  auto h = kz_state(2, W);
  for (auto _ : st) benchmark::DoNotOptimize(kz::rhs_serial(2, W, {0.4, 0.0}, h));
}
void BM_kz_rhs_omp(benchmark::State& st) {
  const int W = st.range(0);
  auto h = kz_state(2, W);
  for (auto _ : st) benchmark::DoNotOptimize(kz::rhs_omp(2, W, {0.4, 0.0}, h));
}

}  // namespace

BENCHMARK(BM_concat_serial)->Arg(4)->Arg(6);
BENCHMARK(BM_concat_omp)->Arg(4)->Arg(6);
BENCHMARK(BM_echelon_serial)->Arg(100)->Arg(300);
BENCHMARK(BM_echelon_omp)->Arg(100)->Arg(300);
BENCHMARK(BM_kz_rhs_serial)->Arg(4)->Arg(7);
BENCHMARK(BM_kz_rhs_omp)->Arg(4)->Arg(7);

BENCHMARK_MAIN();
