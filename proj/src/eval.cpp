#include "fisamp/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fisamp/approx.hpp"
#include "fisamp/bounds.hpp"
#include "fisamp/rng.hpp"

namespace fisamp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t content_hash(const TransactionDataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(dataset.size());
  for (const Transaction& tau : dataset.transactions) {
    mix(tau.size());
    for (ItemId id : tau) mix(id);
  }
  return h;
}

std::vector<std::uint64_t> pair_counts_cached(const TransactionDataset& projected,
                                              const ObservedSet& pairs,
                                              const std::string& cache_dir) {
  if (cache_dir.empty())
    return count_supports(projected.transactions, pairs);

  std::filesystem::create_directories(cache_dir);
  std::ostringstream name;
  name << "pairs-" << std::hex << content_hash(projected) << '-'
       << pairs.content_hash() << ".txt";
  const std::filesystem::path path = std::filesystem::path(cache_dir) / name.str();

  if (std::ifstream in(path); in) {
    std::uint64_t d = 0, total = 0;
    if (in >> d >> total && d == projected.size() && total == pairs.size()) {
      std::vector<std::uint64_t> counts(total);
      bool ok = true;
      for (std::uint64_t& c : counts)
        if (!(in >> c)) {
          ok = false;
          break;
        }
      if (ok) return counts;
    }
  }

  auto counts = count_supports(projected.transactions, pairs);
  std::ofstream out(path);
  if (out) {
    out << projected.size() << ' ' << counts.size() << '\n';
    for (std::uint64_t c : counts) out << c << '\n';
  }
  return counts;
}

}  // namespace

std::string to_string(EvalAlgorithm algorithm) {
  return algorithm == EvalAlgorithm::precomputed ? "precomputed" : "progressive";
}

TransactionDataset project_items(const TransactionDataset& dataset,
                                 std::uint64_t item_limit) {
  if (item_limit == 0) throw std::invalid_argument("item limit must be >= 1");
  TransactionDataset out;
  out.source_name = dataset.source_name;
  const std::size_t keep =
      std::min<std::size_t>(item_limit, dataset.item_universe.size());
  out.item_universe.assign(dataset.item_universe.begin(),
                           dataset.item_universe.begin() + keep);
  const ItemId max_id = keep ? out.item_universe[keep - 1] : 0;
  out.transactions.reserve(dataset.size());
  for (const Transaction& tau : dataset.transactions) {
    Transaction kept;
    for (ItemId id : tau) {
      if (id > max_id) break;  // transactions are sorted
      if (std::binary_search(out.item_universe.begin(), out.item_universe.end(), id))
        kept.push_back(id);
    }
    out.transactions.push_back(std::move(kept));  // empties kept: |D| preserved
  }
  return out;
}

double precision(const RankedItemsets& approx_list,
                 const RankedItemsets& exact_list, std::uint64_t k) {
  const std::size_t denom =
      std::min<std::size_t>(static_cast<std::size_t>(k), exact_list.size());
  if (denom == 0) return approx_list.empty() ? 1.0 : 0.0;
  std::set<Itemset> exact_members;
  for (const auto& [itemset, freq] : exact_list) exact_members.insert(itemset);
  std::size_t shared = 0;
  for (const auto& [itemset, freq] : approx_list)
    shared += exact_members.count(itemset);
  return static_cast<double>(shared) / static_cast<double>(denom);
}

RankedItemsets oracle_top_pairs(const TransactionDataset& projected,
                                std::uint64_t k, const std::string& cache_dir) {
  const ObservedSet pairs = ObservedSet::all_pairs(projected.item_universe);
  const auto counts = pair_counts_cached(projected, pairs, cache_dir);
  FrequencyEstimates est;
  est.itemsets = pairs.itemsets();
  est.sample_size = projected.size();
  est.exact = true;
  est.frequencies.resize(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j)
    est.frequencies[j] =
        static_cast<double>(counts[j]) / static_cast<double>(projected.size());
  return rank_by_frequency(est, k);
}

EvalTrialDetail run_trial(const TransactionDataset& dataset,
                          const EvalConfig& config, EvalAlgorithm algorithm,
                          std::uint64_t trial_seed) {
  if (config.k == 0) throw std::invalid_argument("k must be >= 1");
  const TransactionDataset projected = project_items(dataset, config.item_limit);
  if (projected.item_universe.size() < config.k)
    throw std::invalid_argument("fewer items than k after projection");
  if (projected.item_universe.size() < 2)
    throw std::invalid_argument("need at least two items to form pairs");

  const double log_inv_delta = -std::log(config.delta);
  EvalTrialDetail detail;
  detail.row.dataset_name = projected.source_name;
  detail.row.algorithm = algorithm;
  detail.row.epsilon = config.epsilon;
  detail.row.delta = config.delta;
  detail.row.k = config.k;
  detail.row.trial_seed = trial_seed;

  // Pass 1: singleton frequencies. The samples count toward the trial even
  // though at full item coverage they do not prune anything downstream.
  const ObservedSet singles = ObservedSet::singletons(projected.item_universe);
  const ApproxResult pass1 = approximate_observed(
      projected, singles,
      ApproxConfig{config.epsilon, log_inv_delta, derive_seed(trial_seed, 1)});
  detail.pass1_n = pass1.sample_size_used;
  double elapsed = pass1.elapsed_sec;

  // Pass 2: every pair of the projected universe.
  const ObservedSet pairs = ObservedSet::all_pairs(projected.item_universe);
  RankedItemsets ranked;
  if (algorithm == EvalAlgorithm::precomputed) {
    const ApproxResult pass2 = approximate_observed(
        projected, pairs,
        ApproxConfig{config.epsilon, log_inv_delta, derive_seed(trial_seed, 2)});
    ranked = rank_by_frequency(pass2.estimates, config.k);
    detail.pass2_n = pass2.sample_size_used;
    detail.pass2_full_dataset = pass2.full_dataset_used;
    elapsed += pass2.elapsed_sec;
  } else {
    TopKConfig topk_cfg;
    topk_cfg.k = config.k;
    topk_cfg.batch_size = config.batch;
    topk_cfg.epsilon = config.epsilon;
    topk_cfg.log_inv_delta = log_inv_delta;
    topk_cfg.seed = derive_seed(trial_seed, 2);
    const auto start = Clock::now();
    const TopKResult res = topk_progressive(projected, pairs, topk_cfg);
    elapsed += seconds_since(start);
    ranked = res.selected;
    detail.pass2_n = res.final_n;
    detail.pass2_stopped_by = res.stopped_by;
  }

  const RankedItemsets exact =
      oracle_top_pairs(projected, config.k, config.cache_dir);
  detail.row.precision = precision(ranked, exact, config.k);
  detail.row.sample_size = detail.pass1_n + detail.pass2_n;
  detail.row.elapsed_sec = elapsed;
  return detail;
}

std::vector<EvalRow> run_pipeline(const TransactionDataset& dataset,
                                  const EvalConfig& config,
                                  EvalAlgorithm algorithm) {
  if (config.trials == 0) throw std::invalid_argument("trials must be >= 1");
  std::vector<std::uint64_t> seeds = config.seeds;
  if (seeds.empty()) {
    seeds.resize(config.trials);
    for (std::uint64_t i = 0; i < config.trials; ++i) seeds[i] = i + 1;
  }
  std::sort(seeds.begin(), seeds.end());
  std::vector<EvalRow> rows;
  rows.reserve(seeds.size());
  for (std::uint64_t seed : seeds)
    rows.push_back(run_trial(dataset, config, algorithm, seed).row);
  return rows;
}

void write_eval_csv(const std::vector<EvalRow>& rows, std::uint64_t item_limit,
                    std::ostream& out) {
  out << "dataset,algorithm,epsilon,delta,k,elapsed_sec,sample_size,precision,"
         "trial_seed\n";
  out << std::setprecision(17);
  for (const EvalRow& r : rows) {
    out << r.dataset_name << ',' << to_string(r.algorithm) << ',' << r.epsilon
        << ',' << r.delta << ',' << r.k << ',' << r.elapsed_sec << ','
        << r.sample_size << ',' << r.precision << ',' << r.trial_seed << '\n';
  }
  out << "# item_limit=" << item_limit << '\n';
}

void emit_bound_curves(const std::vector<std::uint64_t>& n_grid,
                       double log_inv_delta, double log_count_a,
                       double log_count_b, EllRule ell_rule, double fixed_ell,
                       std::ostream& out) {
  if (n_grid.empty()) throw std::invalid_argument("empty n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()))
    throw std::invalid_argument("n grid must be ascending");
  out << "n,delta,count,ell,delta1,delta2\n";
  out << std::setprecision(17);
  const double delta = std::exp(-log_inv_delta);
  for (double log_count : {log_count_a, log_count_b}) {
    for (std::uint64_t n : n_grid) {
      BoundInputs in;
      in.n = n;
      in.log_inv_delta = log_inv_delta;
      in.log_function_count = log_count;
      in.ell = ell_rule == EllRule::sqrt_n ? std::sqrt(static_cast<double>(n))
                                           : fixed_ell;
      out << n << ',' << delta << ',' << std::exp(log_count) << ',' << *in.ell
          << ',' << delta_one(in) << ',' << delta_two(in) << '\n';
    }
  }
}

}  // namespace fisamp
