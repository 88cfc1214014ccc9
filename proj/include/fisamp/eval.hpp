#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fisamp/dataset.hpp"
#include "fisamp/support.hpp"
#include "fisamp/topk.hpp"

namespace fisamp {

enum class EvalAlgorithm { precomputed, progressive };

std::string to_string(EvalAlgorithm algorithm);

struct EvalConfig {
  std::uint64_t trials = 10;
  std::uint64_t k = 10;
  std::uint64_t item_limit = 70;
  double epsilon = 0.05;
  double delta = 1e-4;
  std::uint64_t batch = 100;
  std::vector<std::uint64_t> seeds;  // empty: 1..trials
  std::string cache_dir;             // empty: no on-disk oracle cache
};

struct EvalRow {
  std::string dataset_name;
  EvalAlgorithm algorithm = EvalAlgorithm::precomputed;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t k = 0;
  double elapsed_sec = 0.0;
  std::uint64_t sample_size = 0;  // pass-1 plus pass-2 samples
  double precision = 0.0;
  std::uint64_t trial_seed = 0;
};

// Per-trial breakdown behind an EvalRow, for assertions on the individual
// passes.
struct EvalTrialDetail {
  EvalRow row;
  std::uint64_t pass1_n = 0;
  std::uint64_t pass2_n = 0;
  bool pass2_full_dataset = false;
  StoppedBy pass2_stopped_by = StoppedBy::condition_met;  // progressive only
};

// Restriction to the item_limit smallest item ids: other items are removed
// from every transaction, empty transactions are kept so |D| is preserved.
TransactionDataset project_items(const TransactionDataset& dataset,
                                 std::uint64_t item_limit);

// |top-k(approx) intersect top-k(exact)| / min(k, list length).
double precision(const RankedItemsets& approx_list,
                 const RankedItemsets& exact_list, std::uint64_t k);

// One seeded end-to-end trial: project, approximate all singleton
// frequencies (pass 1), then estimate all pairs of the projected universe
// with the precomputed-size algorithm or the progressive top-k loop
// (pass 2), and score the resulting top-k pairs against the exact oracle.
// Timing covers sampling and counting only.
EvalTrialDetail run_trial(const TransactionDataset& dataset,
                          const EvalConfig& config, EvalAlgorithm algorithm,
                          std::uint64_t trial_seed);

std::vector<EvalRow> run_pipeline(const TransactionDataset& dataset,
                                  const EvalConfig& config,
                                  EvalAlgorithm algorithm);

// Exact top-k pairs over the projected universe, via the on-disk cache when
// cache_dir is non-empty.
RankedItemsets oracle_top_pairs(const TransactionDataset& projected,
                                std::uint64_t k, const std::string& cache_dir);

// Header exactly `dataset,algorithm,epsilon,delta,k,elapsed_sec,sample_size,
// precision,trial_seed`; item_limit recorded as a trailing comment line.
void write_eval_csv(const std::vector<EvalRow>& rows, std::uint64_t item_limit,
                    std::ostream& out);

enum class EllRule { sqrt_n, fixed };

// Figure-style bound curves: for each function count, one row per grid n
// with delta1 (ell per rule) and delta2. Header `n,delta,count,ell,delta1,
// delta2`.
void emit_bound_curves(const std::vector<std::uint64_t>& n_grid,
                       double log_inv_delta, double log_count_a,
                       double log_count_b, EllRule ell_rule, double fixed_ell,
                       std::ostream& out);

}  // namespace fisamp
