#include "fisamp/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>

#include "fisamp/approx.hpp"
#include "fisamp/rng.hpp"
#include "fisamp/support.hpp"

namespace fisamp {

bool freq_at_least(std::uint64_t count, std::uint64_t size, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw std::invalid_argument("threshold must be in (0,1]");
  if (size == 0) throw std::invalid_argument("size must be >= 1");
  if (size >= (1ULL << 43))
    throw std::invalid_argument("size too large for exact threshold comparison");
  if (count == 0) return false;
  if (count >= size) return true;
  // threshold = J * 2^(e-53) with integral J < 2^53, so
  // count/size >= threshold  <=>  count << (53-e) >= J * size, exactly.
  int e = 0;
  const double mant = std::frexp(threshold, &e);
  const auto j = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  const int shift = 53 - e;  // e <= 1 since threshold <= 1
  // J*size < 2^96; once the shifted count reaches 2^96 the test is decided.
  if (shift >= 96 || (count >> (96 - shift)) != 0) return true;
  const auto lhs = static_cast<unsigned __int128>(count) << shift;
  const auto rhs = static_cast<unsigned __int128>(j) * size;
  return lhs >= rhs;
}

std::pair<std::vector<ItemId>, double> pass1_threshold(
    const TransactionDataset& dataset, const CandidatePipelineConfig& config) {
  if (config.k == 0) throw std::invalid_argument("k must be >= 1");
  if (dataset.item_universe.size() < config.k)
    throw std::invalid_argument("fewer distinct items than k");

  const ObservedSet singles = ObservedSet::singletons(dataset.item_universe);
  const ApproxConfig approx_cfg{config.epsilon, config.log_inv_delta,
                                derive_seed(config.seed, 0)};
  const ApproxResult res = approximate_observed(dataset, singles, approx_cfg);

  std::vector<double> sorted = res.estimates.frequencies;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double threshold = sorted[config.k - 1];

  std::vector<ItemId> frequent;
  for (std::size_t j = 0; j < res.estimates.size(); ++j)
    if (res.estimates.frequencies[j] >= threshold)
      frequent.push_back(res.estimates.itemsets[j].items[0]);
  return {frequent, threshold};
}

std::vector<Itemset> son_frequent_pairs(const TransactionDataset& dataset,
                                        double threshold,
                                        std::uint64_t chunk_count,
                                        const std::vector<ItemId>& restrict_to,
                                        std::vector<std::uint64_t>* chunk_counts) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw std::invalid_argument("threshold must be in (0,1]");
  if (chunk_count == 0) throw std::invalid_argument("chunk count must be >= 1");
  if (dataset.transactions.empty())
    throw std::invalid_argument("mining an empty dataset");
  const std::uint64_t d = dataset.size();
  if (chunk_count > d) {
    std::cerr << "son_frequent_pairs: clamping chunk count " << chunk_count
              << " to dataset size " << d << "\n";
    chunk_count = d;
  }

  std::vector<ItemId> items = restrict_to;
  normalize_items(items);
  const std::size_t m = items.size();
  if (chunk_counts) chunk_counts->assign(chunk_count, 0);
  if (m < 2) return {};

  // Pass 1: per contiguous chunk, pairs whose in-chunk frequency reaches the
  // threshold. Dense triangular counters indexed by item rank.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> found(chunk_count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long chunk = 0; chunk < static_cast<long long>(chunk_count); ++chunk) {
    const std::size_t begin = static_cast<std::size_t>(chunk) * d / chunk_count;
    const std::size_t end = (static_cast<std::size_t>(chunk) + 1) * d / chunk_count;
    std::vector<std::uint64_t> tri(m * (m - 1) / 2, 0);
    std::vector<std::uint32_t> present;
    for (std::size_t t = begin; t < end; ++t) {
      present.clear();
      const Transaction& tau = dataset.transactions[t];
      std::size_t pi = 0;
      for (ItemId id : tau) {
        while (pi < m && items[pi] < id) ++pi;
        if (pi == m) break;
        if (items[pi] == id) present.push_back(static_cast<std::uint32_t>(pi++));
      }
      for (std::size_t x = 0; x < present.size(); ++x)
        for (std::size_t y = x + 1; y < present.size(); ++y)
          ++tri[static_cast<std::size_t>(present[x]) * (2 * m - present[x] - 3) / 2 +
                present[y] - 1];
    }
    const std::uint64_t chunk_size = end - begin;
    auto& out = found[static_cast<std::size_t>(chunk)];
    for (std::uint32_t x = 0; x + 1 < m; ++x) {
      for (std::uint32_t y = x + 1; y < m; ++y) {
        const std::uint64_t c =
            tri[static_cast<std::size_t>(x) * (2 * m - x - 3) / 2 + y - 1];
        if (c > 0 && freq_at_least(c, chunk_size, threshold)) out.emplace_back(x, y);
      }
    }
    if (chunk_counts) (*chunk_counts)[static_cast<std::size_t>(chunk)] = out.size();
  }

  std::set<std::pair<std::uint32_t, std::uint32_t>> unioned;
  for (const auto& chunk_pairs : found)
    unioned.insert(chunk_pairs.begin(), chunk_pairs.end());

  // Pass 2: exact global counts over the union, drop the false positives.
  std::vector<Itemset> candidates;
  candidates.reserve(unioned.size());
  for (const auto& [x, y] : unioned)
    candidates.push_back(Itemset{items[x], items[y]});
  if (candidates.empty()) return {};
  const auto counts = count_supports(dataset.transactions, candidates);
  std::vector<Itemset> result;
  for (std::size_t j = 0; j < candidates.size(); ++j)
    if (freq_at_least(counts[j], d, threshold)) result.push_back(candidates[j]);
  std::sort(result.begin(), result.end());
  return result;
}

CandidateReport build_observed_pairs(const TransactionDataset& dataset,
                                     const CandidatePipelineConfig& config) {
  CandidateReport report;
  auto [items, threshold] = pass1_threshold(dataset, config);
  report.threshold = threshold;
  report.frequent_items = std::move(items);
  report.candidate_pairs =
      son_frequent_pairs(dataset, threshold, config.chunk_count,
                         report.frequent_items, &report.chunk_counts);
  return report;
}

}  // namespace fisamp
