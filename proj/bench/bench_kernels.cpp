#include <benchmark/benchmark.h>

#include <cstdint>

#include "fisamp/bounds.hpp"
#include "fisamp/dataset.hpp"
#include "fisamp/support.hpp"

namespace {

using namespace fisamp;

SyntheticSpec bench_spec(std::uint64_t transactions) {
  SyntheticSpec spec;
  for (ItemId id = 1; id <= 40; ++id)
    spec.item_marginals.emplace_back(id, 0.05 + 0.02 * static_cast<double>(id % 20));
  spec.transaction_count = transactions;
  return spec;
}

const TransactionDataset& bench_dataset() {
  static const TransactionDataset data = generate_synthetic(bench_spec(20000), 7);
  return data;
}

const ObservedSet& bench_pairs() {
  static const ObservedSet pairs = [] {
    std::vector<ItemId> items;
    for (ItemId id = 1; id <= 20; ++id) items.push_back(id);
    return ObservedSet::all_pairs(items);
  }();
  return pairs;
}

void BM_count_supports_serial(benchmark::State& state) {
  const auto& data = bench_dataset();
  const auto& pairs = bench_pairs();
  for (auto _ : state) {
    auto counts = count_supports_serial(data.transactions, pairs);
    benchmark::DoNotOptimize(counts);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_count_supports_serial)->Unit(benchmark::kMillisecond);

void BM_count_supports_parallel(benchmark::State& state) {
  const auto& data = bench_dataset();
  const auto& pairs = bench_pairs();
  for (auto _ : state) {
    auto counts = count_supports(data.transactions, pairs);
    benchmark::DoNotOptimize(counts);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_count_supports_parallel)->Unit(benchmark::kMillisecond);

Sample rademacher_sample(std::uint64_t n) {
  return draw_sample(bench_dataset(), n, 11, true);
}

const ObservedSet& rademacher_family() {
  static const ObservedSet family = [] {
    std::vector<Itemset> sets;
    for (ItemId id = 1; id <= 8; ++id) sets.push_back(Itemset{id, id + 1});
    return ObservedSet(std::move(sets));
  }();
  return family;
}

void BM_rademacher_serial(benchmark::State& state) {
  const Sample sample = rademacher_sample(static_cast<std::uint64_t>(state.range(0)));
  const auto& family = rademacher_family();
  for (auto _ : state) {
    double r = exact_rademacher_serial(sample, family);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_rademacher_serial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_rademacher_parallel(benchmark::State& state) {
  const Sample sample = rademacher_sample(static_cast<std::uint64_t>(state.range(0)));
  const auto& family = rademacher_family();
  for (auto _ : state) {
    double r = exact_rademacher(sample, family);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_rademacher_parallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
