#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace fisamp {

using ItemId = std::uint32_t;

// A transaction is a sorted, duplicate-free list of item ids.
using Transaction = std::vector<ItemId>;

// Sorts and deduplicates in place.
inline void normalize_items(std::vector<ItemId>& items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

inline Transaction make_transaction(std::vector<ItemId> items) {
  normalize_items(items);
  return items;
}

/// A set of items whose co-occurrence frequency is of interest.
/// May be empty; items are kept sorted strictly ascending.
struct Itemset {
  std::vector<ItemId> items;

  Itemset() = default;
  explicit Itemset(std::vector<ItemId> ids) : items(std::move(ids)) {
    normalize_items(items);
  }
  Itemset(std::initializer_list<ItemId> ids)
      : Itemset(std::vector<ItemId>(ids)) {}

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }

  bool operator==(const Itemset& other) const { return items == other.items; }
  // Lexicographic on the sorted item lists; used for all tie-breaking.
  bool operator<(const Itemset& other) const { return items < other.items; }
};

// True iff every item of `a` occurs in the sorted transaction `tau`.
inline bool contains_all(const Transaction& tau, const Itemset& a) {
  if (a.items.size() > tau.size()) return false;
  // Small itemsets (the common case: singletons and pairs) do better with
  // per-item binary search than a full merge walk.
  if (a.items.size() <= 4) {
    for (ItemId id : a.items) {
      if (!std::binary_search(tau.begin(), tau.end(), id)) return false;
    }
    return true;
  }
  return std::includes(tau.begin(), tau.end(), a.items.begin(), a.items.end());
}

// "1+5+9"; the empty itemset renders as an empty string.
inline std::string format_itemset(const Itemset& a) {
  std::string out;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(a.items[i]);
  }
  return out;
}

}  // namespace fisamp
