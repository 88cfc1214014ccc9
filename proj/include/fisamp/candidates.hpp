#pragma once

#include <cstdint>
#include <vector>

#include "fisamp/dataset.hpp"
#include "fisamp/items.hpp"

namespace fisamp {

struct CandidatePipelineConfig {
  std::uint64_t k = 10;
  std::uint64_t chunk_count = 8;
  double epsilon = 0.05;
  double log_inv_delta = 0.0;
  std::uint64_t seed = 0;
};

struct CandidateReport {
  double threshold = 0.0;                // T, the k-th largest item estimate
  std::vector<ItemId> frequent_items;    // items with estimate >= T
  std::vector<Itemset> candidate_pairs;  // pairs with exact frequency >= T
  std::vector<std::uint64_t> chunk_counts;  // per-chunk pass-1 candidate totals
};

// Exact test count/size >= threshold, with the threshold decomposed into
// mantissa and exponent so no floating-point rounding can flip the
// comparison. Requires 0 < threshold <= 1 and size >= 1.
bool freq_at_least(std::uint64_t count, std::uint64_t size, double threshold);

// Approximates all singleton frequencies and takes T as the k-th largest
// estimate; returns every item whose estimate is >= T (more than k under
// ties). Requires at least k distinct items.
std::pair<std::vector<ItemId>, double> pass1_threshold(
    const TransactionDataset& dataset, const CandidatePipelineConfig& config);

// Two-pass exact mining of the pairs (within restrict_to) whose global
// frequency is >= threshold. Pass 1 collects, per contiguous chunk, the
// pairs whose in-chunk frequency is >= threshold (no false negatives:
// a globally frequent pair is frequent in at least one chunk); pass 2
// counts the union exactly and drops false positives. chunk_counts, when
// given, receives the per-chunk candidate totals.
std::vector<Itemset> son_frequent_pairs(const TransactionDataset& dataset,
                                        double threshold,
                                        std::uint64_t chunk_count,
                                        const std::vector<ItemId>& restrict_to,
                                        std::vector<std::uint64_t>* chunk_counts = nullptr);

// pass1_threshold followed by son_frequent_pairs restricted to the
// frequent items.
CandidateReport build_observed_pairs(const TransactionDataset& dataset,
                                     const CandidatePipelineConfig& config);

}  // namespace fisamp
