#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mumford/bench.hpp"
#include "mumford/fast.hpp"
#include "mumford/naive.hpp"

using namespace mumford;

namespace {

std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(MUMFORD_FIXTURES) + "/" + name + ".json");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string& q3_mr() {
  static const std::string text = fixture_text("q3_mr");
  return text;
}

// Engine construction plus one pairing, as in the CLI bench rows.
void BM_FastTheta(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  int nu_used = 0;
  for (auto _ : state) {
    auto L = engine_from_json(q3_mr(), m);
    std::mt19937_64 rng(1);
    auto [D, E] = random_divisor_pair(L.engine.group(), rng);
    benchmark::DoNotOptimize(theta_pair(L.engine, D, E, &nu_used));
  }
  state.counters["nu"] = nu_used;
}
BENCHMARK(BM_FastTheta)->Arg(10)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NaiveTheta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GroupFile gf = parse_group(q3_mr(), naive_digits(10, n));
  std::mt19937_64 rng(1);
  auto [D, E] = random_divisor_pair(gf.group, rng);
  for (auto _ : state) benchmark::DoNotOptimize(theta_naive(gf.group, D, E, n).value);
  state.counters["words"] = static_cast<double>(word_count(2, n));
}
BENCHMARK(BM_NaiveTheta)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

// A single recursion step at fixed precision.
void BM_NablaStep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto L = engine_from_json(q3_mr(), m);
  std::mt19937_64 rng(1);
  auto E = random_divisor_pair(L.engine.group(), rng).second;
  auto G = L.engine.init_series(E);
  for (auto _ : state) benchmark::DoNotOptimize(L.engine.nabla(G));
}
BENCHMARK(BM_NablaStep)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
