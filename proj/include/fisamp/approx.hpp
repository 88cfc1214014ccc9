#pragma once

#include <cstdint>

#include "fisamp/dataset.hpp"
#include "fisamp/support.hpp"

namespace fisamp {

struct ApproxConfig {
  double epsilon = 0.05;
  double log_inv_delta = 0.0;
  std::uint64_t seed = 0;
};

struct ApproxResult {
  FrequencyEstimates estimates;
  std::uint64_t sample_size_used = 0;
  bool full_dataset_used = false;
  double elapsed_sec = 0.0;
};

// Estimates every subset of the item universe. Sizes the sample with
// N = 2^|I|; refuses universes above 24 items since the output has 2^|I|
// entries. With probability >= 1 - delta, every estimate is within epsilon
// of the true frequency.
ApproxResult approximate_all(const TransactionDataset& dataset,
                             const ApproxConfig& config);

// Same guarantee restricted to an explicit family; sized with N = |observed|.
// When the computed sample size reaches |D|, the whole dataset is scanned
// and the estimates are exact.
ApproxResult approximate_observed(const TransactionDataset& dataset,
                                  const ObservedSet& observed,
                                  const ApproxConfig& config);

}  // namespace fisamp
