#include "fisamp/support.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fisamp {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_itemsets(const std::vector<Itemset>& itemsets) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Itemset& a : itemsets) {
    h = fnv1a(h, a.size());
    for (ItemId id : a.items) h = fnv1a(h, id);
  }
  return h;
}

std::vector<std::uint64_t> count_raw_serial(
    const std::vector<Transaction>& transactions,
    const std::vector<Itemset>& itemsets) {
  std::vector<std::uint64_t> counts(itemsets.size(), 0);
  for (const Transaction& tau : transactions) {
    for (std::size_t j = 0; j < itemsets.size(); ++j) {
      counts[j] += static_cast<std::uint64_t>(contains_all(tau, itemsets[j]));
    }
  }
  return counts;
}

std::vector<std::uint64_t> count_raw(const std::vector<Transaction>& transactions,
                                     const std::vector<Itemset>& itemsets) {
#ifdef _OPENMP
  std::vector<std::uint64_t> counts(itemsets.size(), 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(itemsets.size(), 0);
    const auto limit = static_cast<std::ptrdiff_t>(transactions.size());
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < limit; ++i) {
      for (std::size_t j = 0; j < itemsets.size(); ++j) {
        local[j] +=
            static_cast<std::uint64_t>(contains_all(transactions[i], itemsets[j]));
      }
    }
#pragma omp critical
    for (std::size_t j = 0; j < itemsets.size(); ++j) counts[j] += local[j];
  }
  return counts;
#else
  return count_raw_serial(transactions, itemsets);
#endif
}

}  // namespace

ObservedSet::ObservedSet(std::vector<Itemset> itemsets)
    : itemsets_(std::move(itemsets)) {
  std::sort(itemsets_.begin(), itemsets_.end());
  itemsets_.erase(std::unique(itemsets_.begin(), itemsets_.end()),
                  itemsets_.end());
  if (itemsets_.empty())
    throw std::invalid_argument("observed set must not be empty");
  hash_ = hash_itemsets(itemsets_);
}

ObservedSet ObservedSet::singletons(const std::vector<ItemId>& items) {
  std::vector<Itemset> sets;
  sets.reserve(items.size());
  for (ItemId id : items) sets.push_back(Itemset{id});
  return ObservedSet(std::move(sets));
}

ObservedSet ObservedSet::all_pairs(const std::vector<ItemId>& items) {
  std::vector<ItemId> ids = items;
  normalize_items(ids);
  std::vector<Itemset> sets;
  sets.reserve(ids.size() * (ids.size() + 1) / 2);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      sets.push_back(Itemset{ids[i], ids[j]});
  return ObservedSet(std::move(sets));
}

double FrequencyEstimates::frequency_of(const Itemset& itemset) const {
  auto it = std::lower_bound(itemsets.begin(), itemsets.end(), itemset);
  if (it == itemsets.end() || !(*it == itemset))
    throw std::out_of_range("itemset not in estimates: " + format_itemset(itemset));
  return frequencies[static_cast<std::size_t>(it - itemsets.begin())];
}

int phi(const Itemset& itemset, const Transaction& transaction) {
  return contains_all(transaction, itemset) ? 1 : 0;
}

double exact_frequency(const TransactionDataset& dataset, const Itemset& itemset) {
  if (dataset.transactions.empty())
    throw std::invalid_argument("frequency over an empty dataset");
  std::uint64_t count = 0;
  for (const Transaction& tau : dataset.transactions)
    count += static_cast<std::uint64_t>(contains_all(tau, itemset));
  return static_cast<double>(count) / static_cast<double>(dataset.size());
}

std::vector<std::uint64_t> count_supports(const std::vector<Transaction>& transactions,
                                          const ObservedSet& observed) {
  return count_raw(transactions, observed.itemsets());
}

std::vector<std::uint64_t> count_supports(const std::vector<Transaction>& transactions,
                                          const std::vector<Itemset>& itemsets) {
  return count_raw(transactions, itemsets);
}

std::vector<std::uint64_t> count_supports_serial(
    const std::vector<Transaction>& transactions, const ObservedSet& observed) {
  return count_raw_serial(transactions, observed.itemsets());
}

std::vector<std::uint64_t> count_supports_serial(
    const std::vector<Transaction>& transactions,
    const std::vector<Itemset>& itemsets) {
  return count_raw_serial(transactions, itemsets);
}

PartialCounts count_segment(const std::vector<Transaction>& transactions,
                            std::size_t begin, std::size_t end,
                            const ObservedSet& observed) {
  if (begin > end || end > transactions.size())
    throw std::out_of_range("segment bounds outside the sample");
  PartialCounts part;
  part.counts.assign(observed.size(), 0);
  part.segment_size = end - begin;
  part.observed_hash = observed.content_hash();
  const auto& sets = observed.itemsets();
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = 0; j < sets.size(); ++j)
      part.counts[j] +=
          static_cast<std::uint64_t>(contains_all(transactions[i], sets[j]));
  return part;
}

PartialCounts merge_partial_counts(const PartialCounts& left,
                                   const PartialCounts& right) {
  // The identity element (default-constructed) merges with anything.
  if (left.segment_size == 0 && left.counts.empty()) return right;
  if (right.segment_size == 0 && right.counts.empty()) return left;
  if (left.counts.size() != right.counts.size() ||
      left.observed_hash != right.observed_hash)
    throw std::invalid_argument("partial counts cover different observed sets");
  PartialCounts merged;
  merged.counts.resize(left.counts.size());
  for (std::size_t j = 0; j < left.counts.size(); ++j)
    merged.counts[j] = left.counts[j] + right.counts[j];
  merged.segment_size = left.segment_size + right.segment_size;
  merged.observed_hash = left.observed_hash;
  return merged;
}

FrequencyEstimates sampled_frequencies(const Sample& sample,
                                       const ObservedSet& observed) {
  if (sample.transactions.empty())
    throw std::invalid_argument("frequencies over an empty sample");
  FrequencyEstimates est;
  est.itemsets = observed.itemsets();
  est.sample_size = sample.size();
  est.exact = false;
  auto counts = count_supports(sample.transactions, observed);
  est.frequencies.resize(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j)
    est.frequencies[j] =
        static_cast<double>(counts[j]) / static_cast<double>(est.sample_size);
  return est;
}

FrequencyEstimates exact_frequencies(const TransactionDataset& dataset,
                                     const ObservedSet& observed) {
  if (dataset.transactions.empty())
    throw std::invalid_argument("frequencies over an empty dataset");
  FrequencyEstimates est;
  est.itemsets = observed.itemsets();
  est.sample_size = dataset.size();
  est.exact = true;
  auto counts = count_supports(dataset.transactions, observed);
  est.frequencies.resize(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j)
    est.frequencies[j] =
        static_cast<double>(counts[j]) / static_cast<double>(est.sample_size);
  return est;
}

RankedItemsets rank_by_frequency(const FrequencyEstimates& estimates,
                                 std::uint64_t k) {
  RankedItemsets ranked;
  ranked.reserve(estimates.size());
  for (std::size_t j = 0; j < estimates.size(); ++j)
    ranked.emplace_back(estimates.itemsets[j], estimates.frequencies[j]);
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

RankedItemsets exact_top_k(const TransactionDataset& dataset,
                           const ObservedSet& observed, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  return rank_by_frequency(exact_frequencies(dataset, observed), k);
}

void write_estimates_csv(const FrequencyEstimates& estimates, std::ostream& out) {
  out << "itemset,frequency,n,exact\n";
  out << std::setprecision(17);
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    out << format_itemset(estimates.itemsets[j]) << ','
        << estimates.frequencies[j] << ',' << estimates.sample_size << ','
        << (estimates.exact ? 1 : 0) << '\n';
  }
}

std::string estimates_to_csv(const FrequencyEstimates& estimates) {
  std::ostringstream out;
  write_estimates_csv(estimates, out);
  return out.str();
}

}  // namespace fisamp
