#include "fisamp/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fisamp {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double check_log(double value, const char* what) {
  if (!(value >= 0.0))
    throw std::invalid_argument(std::string(what) + " must be >= 0");
  return value;
}

// ln sum_A exp(s^2 c_A / (2 n^2)), with the largest exponent factored out so
// nothing overflows.
double log_sum_terms(double s, const std::vector<std::uint64_t>& counts,
                     std::uint64_t n) {
  const double scale = s * s / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  const std::uint64_t c_max = *std::max_element(counts.begin(), counts.end());
  const double x_max = scale * static_cast<double>(c_max);
  double sum = 0.0;
  for (std::uint64_t c : counts) {
    sum += std::exp(scale * static_cast<double>(c) - x_max);
  }
  return x_max + std::log(sum);
}

}  // namespace

BoundInputs BoundInputs::with_count(std::uint64_t n, double log_inv_delta,
                                    std::uint64_t function_count) {
  if (function_count == 0)
    throw std::invalid_argument("function count must be >= 1");
  BoundInputs in;
  in.n = n;
  in.log_inv_delta = check_log(log_inv_delta, "log(1/delta)");
  in.log_function_count = std::log(static_cast<double>(function_count));
  return in;
}

BoundInputs BoundInputs::with_items(std::uint64_t n, double log_inv_delta,
                                    std::uint64_t item_count) {
  BoundInputs in;
  in.n = n;
  in.log_inv_delta = check_log(log_inv_delta, "log(1/delta)");
  in.log_function_count = static_cast<double>(item_count) * kLn2;
  return in;
}

double delta_one(const BoundInputs& inputs) {
  if (!inputs.ell)
    throw std::invalid_argument("delta1 needs ell");
  if (inputs.n == 0) throw std::invalid_argument("n must be >= 1");
  const double n = static_cast<double>(inputs.n);
  return (2.0 * *inputs.ell / n) * std::sqrt(2.0 * inputs.log_function_count) +
         std::sqrt(2.0 * (kLn2 + inputs.log_inv_delta) / n);
}

double delta_one_prime(const BoundInputs& inputs, double w_star) {
  if (w_star < 0.0) throw std::invalid_argument("w_star must be >= 0");
  if (inputs.n == 0) throw std::invalid_argument("n must be >= 1");
  const double n = static_cast<double>(inputs.n);
  return w_star + std::sqrt(2.0 * (kLn2 + inputs.log_inv_delta) / n);
}

double delta_two(const BoundInputs& inputs) {
  if (inputs.n == 0) throw std::invalid_argument("n must be >= 1");
  const double n = static_cast<double>(inputs.n);
  return std::sqrt((kLn2 + inputs.log_function_count + inputs.log_inv_delta) /
                   (2.0 * n));
}

std::uint64_t required_sample_size_log(double epsilon, double log_inv_delta,
                                       double log_function_count) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0,1)");
  check_log(log_inv_delta, "log(1/delta)");
  check_log(log_function_count, "log function count");
  const double raw = (kLn2 + log_function_count + log_inv_delta) /
                     (2.0 * epsilon * epsilon);
  const double ceiled = std::ceil(raw);
  if (ceiled >= 1.8e19) throw std::overflow_error("required sample size overflows");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ceiled));
}

std::uint64_t required_sample_size(double epsilon, double log_inv_delta,
                                   std::uint64_t function_count) {
  if (function_count == 0)
    throw std::invalid_argument("function count must be >= 1");
  return required_sample_size_log(epsilon, log_inv_delta,
                                  std::log(static_cast<double>(function_count)));
}

double massart_ell(const Sample& sample, const ObservedSet& observed) {
  if (sample.transactions.empty())
    throw std::invalid_argument("ell over an empty sample");
  auto counts = count_supports(sample.transactions, observed);
  const std::uint64_t c_max = *std::max_element(counts.begin(), counts.end());
  return std::sqrt(static_cast<double>(c_max));
}

double w_of_s(double s, const std::vector<std::uint64_t>& counts,
              std::uint64_t n) {
  if (!(s > 0.0)) throw std::invalid_argument("s must be > 0");
  if (counts.empty()) throw std::invalid_argument("no observed counts");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  return log_sum_terms(s, counts, n) / s;
}

double w_of_s(double s, const Sample& sample, const ObservedSet& observed) {
  return w_of_s(s, count_supports(sample.transactions, observed), sample.size());
}

WMinimum minimize_w(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  if (counts.empty()) throw std::invalid_argument("no observed counts");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (counts.size() == 1) return {0.0, 0.0};  // infimum 0 at s -> 0+
  const std::uint64_t c_max = *std::max_element(counts.begin(), counts.end());
  if (c_max == 0) {
    // w(s) = ln|Ob| / s, strictly decreasing: infimum 0 at s -> inf.
    return {std::numeric_limits<double>::infinity(), 0.0};
  }

  auto w = [&](double s) { return w_of_s(s, counts, n); };

  // Geometric bracketing around s = 1: w -> inf at both ends of (0, inf).
  double a = 0.5, b = 1.0, c = 2.0;
  double wa = w(a), wb = w(b), wc = w(c);
  while (wa < wb && a > 1e-300) {
    c = b;
    wc = wb;
    b = a;
    wb = wa;
    a *= 0.5;
    wa = w(a);
  }
  while (wc < wb && c < 1e300) {
    a = b;
    wa = wb;
    b = c;
    wb = wc;
    c *= 2.0;
    wc = w(c);
  }

  // Golden-section in log(s); interval width 1e-11 in log-space is a 1e-11
  // relative window on s, far tighter than the 1e-6 contract on w.
  const double inv_phi = 0.6180339887498949;
  double lo = std::log(a), hi = std::log(c);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = w(std::exp(x1));
  double f2 = w(std::exp(x2));
  while (hi - lo > 1e-11) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = w(std::exp(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = w(std::exp(x2));
    }
  }
  const double s_star = std::exp(0.5 * (lo + hi));
  return {s_star, w(s_star)};
}

WMinimum minimize_w(const Sample& sample, const ObservedSet& observed) {
  if (sample.transactions.empty())
    throw std::invalid_argument("w over an empty sample");
  return minimize_w(count_supports(sample.transactions, observed), sample.size());
}

namespace {

struct RademacherInstance {
  std::vector<std::uint32_t> masks;  // bit i: itemset present in transaction i
  int n = 0;
};

RademacherInstance rademacher_setup(const Sample& sample,
                                    const ObservedSet& observed) {
  const std::size_t n = sample.size();
  if (n == 0) throw std::invalid_argument("Rademacher average of an empty sample");
  if (n > 20)
    throw std::invalid_argument("exact Rademacher average needs n <= 20");
  RademacherInstance inst;
  inst.n = static_cast<int>(n);
  inst.masks.reserve(observed.size());
  for (const Itemset& a : observed.itemsets()) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (contains_all(sample.transactions[i], a)) mask |= 1u << i;
    inst.masks.push_back(mask);
  }
  return inst;
}

// For sign vector bits (bit set: sigma_i = +1), the itemset's signed sum is
// 2*popcount(mask & bits) - popcount(mask). Everything stays integral until
// the final division, so the result is order-independent.
inline int signed_max(const std::vector<std::uint32_t>& masks, std::uint32_t bits) {
  int best = std::numeric_limits<int>::min();
  for (std::uint32_t mask : masks) {
    const int v = 2 * std::popcount(mask & bits) - std::popcount(mask);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

double exact_rademacher_serial(const Sample& sample, const ObservedSet& observed) {
  const RademacherInstance inst = rademacher_setup(sample, observed);
  const std::uint64_t vectors = 1ULL << inst.n;
  long long total = 0;
  for (std::uint64_t bits = 0; bits < vectors; ++bits)
    total += signed_max(inst.masks, static_cast<std::uint32_t>(bits));
  return static_cast<double>(total) /
         (static_cast<double>(vectors) * static_cast<double>(inst.n));
}

double exact_rademacher(const Sample& sample, const ObservedSet& observed) {
  const RademacherInstance inst = rademacher_setup(sample, observed);
  const long long vectors = 1LL << inst.n;
  long long total = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : total)
#endif
  for (long long bits = 0; bits < vectors; ++bits)
    total += signed_max(inst.masks, static_cast<std::uint32_t>(bits));
  return static_cast<double>(total) /
         (static_cast<double>(vectors) * static_cast<double>(inst.n));
}

}  // namespace fisamp
