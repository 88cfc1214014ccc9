#include "fisamp/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fisamp/bounds.hpp"

namespace fisamp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Sample take_sample(const TransactionDataset& dataset, std::uint64_t n,
                   std::uint64_t seed, bool* full) {
  if (n >= dataset.size()) {
    *full = true;
    return full_sample(dataset);
  }
  *full = false;
  return draw_sample(dataset, n, seed, true);
}

}  // namespace

ApproxResult approximate_all(const TransactionDataset& dataset,
                             const ApproxConfig& config) {
  if (dataset.transactions.empty())
    throw std::invalid_argument("approximation over an empty dataset");
  const std::size_t m = dataset.item_universe.size();
  if (m > 24)
    throw std::invalid_argument(
        "item universe too large for the all-subsets algorithm (max 24 items)");

  constexpr double kLn2 = 0.6931471805599453;
  const std::uint64_t n_req = required_sample_size_log(
      config.epsilon, config.log_inv_delta, static_cast<double>(m) * kLn2);

  const auto start = Clock::now();
  ApproxResult result;
  const Sample sample =
      take_sample(dataset, n_req, config.seed, &result.full_dataset_used);
  result.sample_size_used = sample.size();

  // Every transaction becomes a bitmask over the universe; a subset's count
  // is the number of transaction masks that cover it.
  const std::uint64_t subsets = 1ULL << m;
  std::vector<std::uint32_t> tx_masks;
  tx_masks.reserve(sample.size());
  for (const Transaction& tau : sample.transactions) {
    std::uint32_t mask = 0;
    for (ItemId id : tau) {
      const auto it = std::lower_bound(dataset.item_universe.begin(),
                                       dataset.item_universe.end(), id);
      mask |= 1u << (it - dataset.item_universe.begin());
    }
    tx_masks.push_back(mask);
  }

  std::vector<std::uint64_t> counts(subsets, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long a = 0; a < static_cast<long long>(subsets); ++a) {
    const auto mask = static_cast<std::uint32_t>(a);
    std::uint64_t c = 0;
    for (std::uint32_t t : tx_masks) c += ((t & mask) == mask);
    counts[static_cast<std::size_t>(a)] = c;
  }

  std::vector<std::pair<Itemset, std::uint64_t>> entries;
  entries.reserve(subsets);
  for (std::uint64_t a = 0; a < subsets; ++a) {
    std::vector<ItemId> items;
    for (std::size_t bit = 0; bit < m; ++bit)
      if (a & (1ULL << bit)) items.push_back(dataset.item_universe[bit]);
    entries.emplace_back(Itemset(std::move(items)), counts[a]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  result.estimates.itemsets.reserve(subsets);
  result.estimates.frequencies.reserve(subsets);
  for (auto& [itemset, count] : entries) {
    result.estimates.itemsets.push_back(std::move(itemset));
    result.estimates.frequencies.push_back(static_cast<double>(count) /
                                           static_cast<double>(sample.size()));
  }
  result.estimates.sample_size = sample.size();
  result.estimates.exact = result.full_dataset_used;
  result.elapsed_sec = seconds_since(start);
  return result;
}

ApproxResult approximate_observed(const TransactionDataset& dataset,
                                  const ObservedSet& observed,
                                  const ApproxConfig& config) {
  if (dataset.transactions.empty())
    throw std::invalid_argument("approximation over an empty dataset");
  const std::uint64_t n_req = required_sample_size(
      config.epsilon, config.log_inv_delta, observed.size());

  const auto start = Clock::now();
  ApproxResult result;
  const Sample sample =
      take_sample(dataset, n_req, config.seed, &result.full_dataset_used);
  result.sample_size_used = sample.size();
  result.estimates = sampled_frequencies(sample, observed);
  result.estimates.exact = result.full_dataset_used;
  result.elapsed_sec = seconds_since(start);
  return result;
}

}  // namespace fisamp
