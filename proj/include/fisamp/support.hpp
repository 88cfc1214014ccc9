#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fisamp/dataset.hpp"
#include "fisamp/items.hpp"

namespace fisamp {

// The family of itemsets whose frequencies are estimated. Construction
// sorts, deduplicates, and rejects the empty family.
class ObservedSet {
 public:
  explicit ObservedSet(std::vector<Itemset> itemsets);

  const std::vector<Itemset>& itemsets() const { return itemsets_; }
  std::size_t size() const { return itemsets_.size(); }
  std::uint64_t content_hash() const { return hash_; }

  static ObservedSet singletons(const std::vector<ItemId>& items);
  static ObservedSet all_pairs(const std::vector<ItemId>& items);

 private:
  std::vector<Itemset> itemsets_;  // sorted, unique
  std::uint64_t hash_ = 0;
};

// Frequencies for one observed family, aligned with the ObservedSet order.
struct FrequencyEstimates {
  std::vector<Itemset> itemsets;    // sorted, unique
  std::vector<double> frequencies;  // parallel to itemsets, each in [0,1]
  std::uint64_t sample_size = 0;
  bool exact = false;

  double frequency_of(const Itemset& itemset) const;  // throws if absent
  std::size_t size() const { return itemsets.size(); }
};

// Support counts over a contiguous segment of a sample, mergeable across
// segments that share the same observed family.
struct PartialCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t segment_size = 0;
  std::uint64_t observed_hash = 0;
};

int phi(const Itemset& itemset, const Transaction& transaction);

double exact_frequency(const TransactionDataset& dataset, const Itemset& itemset);

// Per-itemset support counts over a transaction range. The parallel version
// partitions the range across threads; both return identical counts. The
// raw overloads take any itemset list as-is.
std::vector<std::uint64_t> count_supports(const std::vector<Transaction>& transactions,
                                          const ObservedSet& observed);
std::vector<std::uint64_t> count_supports(const std::vector<Transaction>& transactions,
                                          const std::vector<Itemset>& itemsets);
std::vector<std::uint64_t> count_supports_serial(
    const std::vector<Transaction>& transactions, const ObservedSet& observed);
std::vector<std::uint64_t> count_supports_serial(
    const std::vector<Transaction>& transactions,
    const std::vector<Itemset>& itemsets);

PartialCounts count_segment(const std::vector<Transaction>& transactions,
                            std::size_t begin, std::size_t end,
                            const ObservedSet& observed);
PartialCounts merge_partial_counts(const PartialCounts& left,
                                   const PartialCounts& right);

FrequencyEstimates sampled_frequencies(const Sample& sample,
                                       const ObservedSet& observed);
FrequencyEstimates exact_frequencies(const TransactionDataset& dataset,
                                     const ObservedSet& observed);

using RankedItemsets = std::vector<std::pair<Itemset, double>>;

// Top min(k, |observed|) by exact frequency, descending; ties broken by
// lexicographic itemset order, smaller first.
RankedItemsets exact_top_k(const TransactionDataset& dataset,
                           const ObservedSet& observed, std::uint64_t k);

// Same ranking rule applied to already-computed estimates.
RankedItemsets rank_by_frequency(const FrequencyEstimates& estimates,
                                 std::uint64_t k);

// CSV with header `itemset,frequency,n,exact`; itemsets as ids joined by '+'.
void write_estimates_csv(const FrequencyEstimates& estimates, std::ostream& out);
std::string estimates_to_csv(const FrequencyEstimates& estimates);

}  // namespace fisamp
