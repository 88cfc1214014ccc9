#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fisamp/dataset.hpp"
#include "fisamp/support.hpp"

namespace fisamp {

struct TopKConfig {
  std::uint64_t k = 1;
  std::uint64_t batch_size = 100;
  double epsilon = 0.05;
  double log_inv_delta = 0.0;
  std::uint64_t seed = 0;
};

// Running state of the progressive loop. Counts are kept as integers so any
// batch segmentation of the same transaction sequence yields bit-identical
// estimates.
struct TopKState {
  std::vector<Itemset> itemsets;       // sorted, from the observed set
  std::vector<std::uint64_t> counts;   // parallel to itemsets
  std::uint64_t n = 0;
  std::optional<double> midpoint;
  double stop_metric = 0.0;
  std::uint64_t cap = 0;

  FrequencyEstimates estimates() const;
};

enum class StoppedBy { condition_met, cap_reached, dataset_exhausted };

std::string to_string(StoppedBy reason);

struct TopKResult {
  RankedItemsets selected;  // length min(k, |observed|), frequency-descending
  std::uint64_t rounds = 0;
  std::uint64_t final_n = 0;
  StoppedBy stopped_by = StoppedBy::condition_met;
  double stop_metric = 0.0;
};

// Folds one batch into the running estimates:
// f <- (n*f + batch support) / (n + batch size).
TopKState update_estimates(TopKState state, const Sample& batch);

// Midpoint m of the k-th and (k+1)-th largest estimates (ties broken
// lexicographically) and the stopping sum over the whole family,
// sum_A exp(-2 n (f(A) - m)^2). Requires at least k+1 estimates.
std::pair<double, double> stopping_metric(const FrequencyEstimates& estimates,
                                          std::uint64_t k);

// Progressive top-k: repeatedly draws batch_size transactions with
// replacement, updates estimates, and stops when either the sample cap
// N = min(|D|, ceil((ln(2|Ob|) + ln(1/delta)) / (2 epsilon^2))) is exceeded
// or the stopping sum drops below delta. The cap check runs first, so the
// final n can overshoot N by at most one batch. When k >= |observed| all
// observed itemsets are returned immediately with zero rounds.
TopKResult topk_progressive(const TransactionDataset& dataset,
                            const ObservedSet& observed,
                            const TopKConfig& config);

}  // namespace fisamp
