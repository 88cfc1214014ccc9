#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fisamp/dataset.hpp"
#include "fisamp/support.hpp"

namespace fisamp {

// Shared inputs for the worst-case error bounds. Both the failure
// probability and the function count are carried in log-domain so that
// extremes like delta = 10^-10000 or a family of 2^1000 itemsets stay
// representable.
struct BoundInputs {
  std::uint64_t n = 1;
  double log_inv_delta = 0.0;    // ln(1/delta), >= 0
  double log_function_count = 0.0;  // ln N where N is the family size, >= 0
  std::optional<double> ell;     // largest sample l2-norm of an indicator

  static BoundInputs with_count(std::uint64_t n, double log_inv_delta,
                                std::uint64_t function_count);
  static BoundInputs with_items(std::uint64_t n, double log_inv_delta,
                                std::uint64_t item_count);  // N = 2^items
};

struct BoundReport {
  double delta1 = 0.0;
  std::optional<double> delta1_prime;
  double delta2 = 0.0;
  std::optional<double> s_star;
  std::optional<double> w_star;
};

// (2*ell/n)*sqrt(2 ln N) + sqrt(2 (ln 2 + ln(1/delta)) / n). Requires ell.
double delta_one(const BoundInputs& inputs);

// w_star + sqrt(2 (ln 2 + ln(1/delta)) / n).
double delta_one_prime(const BoundInputs& inputs, double w_star);

// sqrt((ln(2N) + ln(1/delta)) / (2n)). With N = |observed| this is the
// tightened variant for an explicit family.
double delta_two(const BoundInputs& inputs);

// Smallest n with delta_two(n) <= epsilon: ceil((ln(2N) + ln(1/delta)) /
// (2 epsilon^2)). The _log variant takes ln N directly.
std::uint64_t required_sample_size(double epsilon, double log_inv_delta,
                                   std::uint64_t function_count);
std::uint64_t required_sample_size_log(double epsilon, double log_inv_delta,
                                       double log_function_count);

// max over observed itemsets of sqrt(support count in the sample).
double massart_ell(const Sample& sample, const ObservedSet& observed);

// w(s) = (1/s) ln sum_A exp(s^2 c_A / (2 n^2)) where c_A is A's support
// count in the sample. Evaluated via log-sum-exp; finite for s up to 1e6,
// n up to 1e9, counts up to 2^64.
double w_of_s(double s, const std::vector<std::uint64_t>& counts,
              std::uint64_t n);
double w_of_s(double s, const Sample& sample, const ObservedSet& observed);

struct WMinimum {
  double s_star = 0.0;
  double w_star = 0.0;
};

// min_{s>0} w(s) by geometric bracketing plus golden-section refinement.
// A single observed itemset has infimum 0 at s -> 0+ (reported s_star = 0);
// an all-zero-count family has infimum 0 at s -> inf.
WMinimum minimize_w(const std::vector<std::uint64_t>& counts, std::uint64_t n);
WMinimum minimize_w(const Sample& sample, const ObservedSet& observed);

// Exact conditional Rademacher average by enumerating all 2^n sign vectors.
// Refuses n > 20. The parallel and serial versions agree exactly (integer
// accumulation).
double exact_rademacher(const Sample& sample, const ObservedSet& observed);
double exact_rademacher_serial(const Sample& sample, const ObservedSet& observed);

}  // namespace fisamp
