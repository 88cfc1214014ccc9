#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fisamp/items.hpp"

namespace fisamp {

/// The population of transactions. Immutable after construction and safe to
/// share across threads.
struct TransactionDataset {
  std::vector<Transaction> transactions;
  std::vector<ItemId> item_universe;  // sorted ascending
  std::string source_name;

  std::size_t size() const { return transactions.size(); }
};

/// Transactions drawn from a dataset, with the metadata needed to reproduce
/// the draw.
struct Sample {
  std::vector<Transaction> transactions;
  std::uint64_t seed = 0;
  bool replacement = true;
  std::uint64_t source_size = 0;

  std::size_t size() const { return transactions.size(); }
};

struct PlantedPair {
  ItemId a = 0;
  ItemId b = 0;
  double joint = 0.0;
};

/// Generator parameters for synthetic transaction data: independent item
/// marginals plus optional pairs drawn jointly at a target co-occurrence
/// probability.
struct SyntheticSpec {
  std::vector<std::pair<ItemId, double>> item_marginals;
  std::vector<PlantedPair> planted_pairs;
  std::uint64_t transaction_count = 0;

  // Throws std::invalid_argument when the parameters cannot describe a valid
  // joint distribution (probabilities outside [0,1], joint above a marginal,
  // joint below the Frechet lower bound, items reused across pairs, ...).
  void validate() const;
};

// One transaction per non-empty line, base-10 item ids separated by spaces.
// Duplicates within a line are dropped. Throws std::runtime_error with the
// offending line number on malformed input, and on an empty dataset.
TransactionDataset load_fimi(const std::string& path);
TransactionDataset load_fimi(std::istream& in, const std::string& name);

// Canonical FIMI text: single spaces, "\n" line ends, no trailing
// whitespace. Transactions that are empty produce no line.
void write_fimi(const TransactionDataset& dataset, std::ostream& out);
void write_fimi(const TransactionDataset& dataset, const std::string& path);
std::string to_fimi_string(const TransactionDataset& dataset);

// Line-based spec file: `item <id> <prob>`, `pair <id> <id> <prob>`,
// `count <n>`; `#` starts a comment.
SyntheticSpec load_synthetic_spec(const std::string& path);
SyntheticSpec parse_synthetic_spec(std::istream& in, const std::string& name);

// Deterministic for fixed (spec, seed). The item universe is every item the
// spec mentions, whether or not it ends up in any transaction.
TransactionDataset generate_synthetic(const SyntheticSpec& spec,
                                      std::uint64_t seed);

// Uniform draws from the dataset. Without replacement and n >= |D| the whole
// dataset is returned unchanged; otherwise exactly n transactions are drawn.
// Deterministic for fixed inputs. Throws on an empty dataset or n == 0.
Sample draw_sample(const TransactionDataset& dataset, std::uint64_t n,
                   std::uint64_t seed, bool replacement);

// The whole dataset viewed as a sample (the n >= |D| fallback path).
Sample full_sample(const TransactionDataset& dataset);

}  // namespace fisamp
