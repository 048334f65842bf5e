#include <benchmark/benchmark.h>

#include <random>

#include "streamrelay/analysis.hpp"
#include "streamrelay/construct.hpp"
#include "streamrelay/field.hpp"
#include "streamrelay/network.hpp"
#include "streamrelay/p2p.hpp"

namespace streamrelay {
namespace {

template <class Cfg>
void BM_FieldMul(benchmark::State& state, Cfg cfg) {
  const GaloisField f(cfg);
  std::mt19937_64 rng(1);
  std::vector<Symbol> xs(4096);
  for (auto& x : xs) x = static_cast<Symbol>(rng() % cfg.size());
  Symbol acc = 1;
  for (auto _ : state) {
    for (Symbol x : xs) acc = f.mul(static_cast<Symbol>(acc ^ x), x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK_CAPTURE(BM_FieldMul, gf256, FieldConfig::gf256());
BENCHMARK_CAPTURE(BM_FieldMul, gf65536, FieldConfig::gf65536());

void BM_Encode(benchmark::State& state) {
  const auto code = build_spectrum_code(30, 15, 3);
  Encoder enc(code);
  Message m(15, 7);
  for (auto _ : state) benchmark::DoNotOptimize(enc.push(m));
}
BENCHMARK(BM_Encode);

void BM_VerifyP2P(benchmark::State& state) {
  const auto code = build_spectrum_code(state.range(0), state.range(1), static_cast<int>(state.range(2)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_p2p(code, code.erasures(), default_horizon(code)));
}
BENCHMARK(BM_VerifyP2P)->Args({4, 2, 1})->Args({12, 6, 2})->Args({30, 15, 3})->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto code = construct_fb({3, 2, 1, 6}, make_rational(1, 2)).code;
  std::mt19937_64 rng(2);
  std::vector<Message> m1(20, Message(15)), m2(20, Message(9));
  for (auto& m : m1) {
    for (auto& s : m) s = static_cast<Symbol>(rng() & 0xFF);
  }
  for (auto& m : m2) {
    for (auto& s : m) s = static_cast<Symbol>(rng() & 0xFF);
  }
  const ErasurePattern pat{{3, 4, 5}, {8, 9}, {11}};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(code, m1, m2, pat, 20));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMicrosecond);

void BM_ObSwdf(benchmark::State& state) {
  const NetworkParams p{3, 2, 1, 4};
  for (auto _ : state) benchmark::DoNotOptimize(ob_swdf(p, make_rational(1, 8)));
}
BENCHMARK(BM_ObSwdf)->Unit(benchmark::kMillisecond);

void BM_Region(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(region({19, 14, 3, 30}, all_schemes()));
}
BENCHMARK(BM_Region)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace streamrelay

BENCHMARK_MAIN();
