#include "fisamp/topk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "fisamp/bounds.hpp"
#include "fisamp/rng.hpp"

namespace fisamp {

namespace {

// (midpoint, ln of the stopping sum). Terms are <= 1, so the log-sum-exp
// pivot keeps the comparison against ln(delta) meaningful even when the sum
// underflows a plain double.
std::pair<double, double> stopping_log_metric(const std::vector<double>& freqs,
                                              std::uint64_t n, std::uint64_t k) {
  if (freqs.size() < k + 1)
    throw std::invalid_argument("stopping metric needs at least k+1 estimates");
  std::vector<double> sorted = freqs;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k),
                   sorted.end(), std::greater<double>());
  const double f_k1 = sorted[k];  // (k+1)-th largest
  const double f_k = *std::min_element(
      sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
  const double m = 0.5 * (f_k + f_k1);

  double x_max = -std::numeric_limits<double>::infinity();
  for (double f : freqs) {
    const double d = f - m;
    x_max = std::max(x_max, -2.0 * static_cast<double>(n) * d * d);
  }
  double sum = 0.0;
  for (double f : freqs) {
    const double d = f - m;
    sum += std::exp(-2.0 * static_cast<double>(n) * d * d - x_max);
  }
  return {m, x_max + std::log(sum)};
}

}  // namespace

FrequencyEstimates TopKState::estimates() const {
  if (n == 0) throw std::logic_error("no samples folded in yet");
  FrequencyEstimates est;
  est.itemsets = itemsets;
  est.sample_size = n;
  est.exact = false;
  est.frequencies.resize(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j)
    est.frequencies[j] =
        static_cast<double>(counts[j]) / static_cast<double>(n);
  return est;
}

std::string to_string(StoppedBy reason) {
  switch (reason) {
    case StoppedBy::condition_met: return "condition_met";
    case StoppedBy::cap_reached: return "cap_reached";
    case StoppedBy::dataset_exhausted: return "dataset_exhausted";
  }
  return "unknown";
}

TopKState update_estimates(TopKState state, const Sample& batch) {
  if (batch.transactions.empty())
    throw std::invalid_argument("empty batch");
  const auto batch_counts = count_supports(batch.transactions, state.itemsets);
  if (batch_counts.size() != state.counts.size())
    throw std::invalid_argument("batch counted over a different observed set");
  for (std::size_t j = 0; j < state.counts.size(); ++j)
    state.counts[j] += batch_counts[j];
  state.n += batch.size();
  return state;
}

std::pair<double, double> stopping_metric(const FrequencyEstimates& estimates,
                                          std::uint64_t k) {
  auto [m, log_sum] =
      stopping_log_metric(estimates.frequencies, estimates.sample_size, k);
  return {m, std::exp(log_sum)};
}

TopKResult topk_progressive(const TransactionDataset& dataset,
                            const ObservedSet& observed,
                            const TopKConfig& config) {
  if (config.k == 0) throw std::invalid_argument("k must be >= 1");
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (dataset.transactions.empty())
    throw std::invalid_argument("top-k over an empty dataset");

  TopKResult result;
  if (config.k >= observed.size()) {
    // Fewer itemsets than ranks requested: nothing to separate.
    for (const Itemset& a : observed.itemsets()) result.selected.emplace_back(a, 0.0);
    result.stopped_by = StoppedBy::condition_met;
    return result;
  }

  const std::uint64_t analytic = required_sample_size(
      config.epsilon, config.log_inv_delta, observed.size());
  const std::uint64_t cap = std::min<std::uint64_t>(dataset.size(), analytic);

  TopKState state;
  state.itemsets = observed.itemsets();
  state.counts.assign(state.itemsets.size(), 0);
  state.cap = cap;

  FrequencyEstimates est;
  for (std::uint64_t round = 0;; ++round) {
    const Sample batch = draw_sample(dataset, config.batch_size,
                                     derive_seed(config.seed, round), true);
    state = update_estimates(std::move(state), batch);
    est = state.estimates();
    auto [m, log_sum] =
        stopping_log_metric(est.frequencies, state.n, config.k);
    state.midpoint = m;
    state.stop_metric = std::exp(log_sum);
    result.rounds = round + 1;
    if (state.n > cap) {
      result.stopped_by = analytic <= dataset.size()
                              ? StoppedBy::cap_reached
                              : StoppedBy::dataset_exhausted;
      break;
    }
    if (log_sum < -config.log_inv_delta) {
      result.stopped_by = StoppedBy::condition_met;
      break;
    }
  }

  result.selected = rank_by_frequency(est, config.k);
  result.final_n = state.n;
  result.stop_metric = state.stop_metric;
  return result;
}

}  // namespace fisamp
