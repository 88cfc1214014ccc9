#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "fisamp/bounds.hpp"
#include "testers.hpp"

using namespace fisamp;

namespace {

constexpr double kLn2 = 0.6931471805599453;

BoundInputs with_log_count(std::uint64_t n, double log_inv_delta,
                           double log_count) {
  BoundInputs in;
  in.n = n;
  in.log_inv_delta = log_inv_delta;
  in.log_function_count = log_count;
  return in;
}

// Straight-line re-derivation of the bound formulas, kept deliberately
// separate from the library code paths.
double delta1_oracle(std::uint64_t n, double lid, double log_count, double ell) {
  return (2.0 * ell / static_cast<double>(n)) * std::sqrt(2.0 * log_count) +
         std::sqrt(2.0 * (kLn2 + lid) / static_cast<double>(n));
}

double delta2_oracle(std::uint64_t n, double lid, double log_count) {
  return std::sqrt((kLn2 + log_count + lid) / (2.0 * static_cast<double>(n)));
}

}  // namespace

TEST_CASE("massart_ell over hand-counted samples") {
  auto data = testers::dataset_from({{1}, {1, 2}, {2}});
  auto s = full_sample(data);
  CHECK(massart_ell(s, ObservedSet({Itemset{1}, Itemset{2}})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // An itemset in every transaction dominates: ell = sqrt(n).
  CHECK(massart_ell(s, ObservedSet({Itemset{}, Itemset{1}})) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // Sole member with zero support.
  CHECK(massart_ell(s, ObservedSet({Itemset{9}})) == 0.0);
}

TEST_CASE("delta_one formula") {
  SUBCASE("vanishing first term") {
    // delta = 2/e^2 makes ln(2/delta) = 2, so the bound is sqrt(2*2/2).
    auto in = with_log_count(2, 2.0 - kLn2, 5.0);
    in.ell = 0.0;
    CHECK(delta_one(in) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("large-family reference point") {
    auto in = BoundInputs::with_items(100000, std::log(100.0), 1000);
    in.ell = std::sqrt(100000.0);
    const double d1 = delta_one(in);
    CHECK(d1 == doctest::Approx(0.24577600019626294).epsilon(1e-13));
    CHECK(d1 == doctest::Approx(0.2458).epsilon(0.0005 / 0.2458));
    CHECK(d1 > 0.15);
  }
  SUBCASE("requires ell") {
    CHECK_THROWS_AS(delta_one(with_log_count(10, 1.0, 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("delta_two formula") {
  SUBCASE("large-family reference point") {
    auto in = BoundInputs::with_items(100000, std::log(100.0), 1000);
    const double d2 = delta_two(in);
    CHECK(d2 == doctest::Approx(0.05909507161881155).epsilon(1e-13));
    CHECK(d2 == doctest::Approx(0.0591).epsilon(0.0005 / 0.0591));
  }
  SUBCASE("quadrupling n halves the bound") {
    for (std::uint64_t n : {64ull, 1000ull, 31250ull}) {
      auto a = BoundInputs::with_count(n, 3.5, 4950);
      auto b = BoundInputs::with_count(4 * n, 3.5, 4950);
      CHECK(delta_two(b) == doctest::Approx(delta_two(a) / 2.0).epsilon(1e-15));
    }
  }
  SUBCASE("consistency with the sizing formula") {
    auto in = BoundInputs::with_count(3683, std::log(1e4), 4950);
    CHECK(delta_two(in) <= 0.05);
    CHECK(delta_two(in) == doctest::Approx(0.049994067538500039).epsilon(1e-13));
  }
}

TEST_CASE("required_sample_size") {
  CHECK(required_sample_size(0.05, std::log(1e4), 4950) == 3683);

  SUBCASE("doubling the count adds ln2/(2 eps^2) before the ceiling") {
    const double eps = 0.07;
    const double step = kLn2 / (2.0 * eps * eps);
    for (std::uint64_t count : {3ull, 100ull, 4950ull}) {
      const auto small = required_sample_size(eps, 2.0, count);
      const auto big = required_sample_size(eps, 2.0, 2 * count);
      CHECK(static_cast<double>(big - small) >= std::floor(step) - 1.0);
      CHECK(static_cast<double>(big - small) <= std::ceil(step) + 1.0);
    }
  }

  SUBCASE("minimality against delta_two") {
    for (double eps : {0.05, 0.11, 0.3}) {
      for (std::uint64_t count : {2ull, 190ull, 4950ull}) {
        const auto n = required_sample_size(eps, std::log(50.0), count);
        CHECK(delta_two(BoundInputs::with_count(n, std::log(50.0), count)) <= eps);
        if (n > 1) {
          // One transaction fewer must overshoot, up to ceiling slack.
          const double prev =
              delta_two(BoundInputs::with_count(n - 1, std::log(50.0), count));
          CHECK(prev > eps * (1.0 - 1e-9));
        }
      }
    }
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(required_sample_size(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(required_sample_size(1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(required_sample_size(0.5, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(required_sample_size(0.5, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(required_sample_size_log(1e-9, 23026.0, 1e7),
                    std::overflow_error);
  }
}

TEST_CASE("w_of_s closed forms") {
  SUBCASE("single all-ones indicator collapses to s/(2n)") {
    for (double s : {0.3, 1.0, 7.5, 400.0}) {
      CHECK(w_of_s(s, {100}, 100) == doctest::Approx(s / 200.0).epsilon(1e-14));
    }
  }
  SUBCASE("two all-ones indicators give ln2/s + s/(2n)") {
    for (double s : {0.5, 2.0, 11.0, 64.0}) {
      CHECK(w_of_s(s, {100, 100}, 100) ==
            doctest::Approx(kLn2 / s + s / 200.0).epsilon(1e-14));
    }
  }
  SUBCASE("s to zero blows up like ln(c)/s") {
    for (std::size_t c : {2u, 5u, 8u}) {
      std::vector<std::uint64_t> counts(c, 3);
      CHECK(w_of_s(1e-6, counts, 10) > 10.0 * std::log(static_cast<double>(c)));
    }
  }
  SUBCASE("log-domain evaluation never overflows") {
    const std::vector<std::uint64_t> huge = {
        std::numeric_limits<std::uint64_t>::max(), 1ull << 62, 17};
    const double v = w_of_s(1e6, huge, 1000000000ull);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(w_of_s(0.0, {1}, 10), std::invalid_argument);
    CHECK_THROWS_AS(w_of_s(-1.0, {1}, 10), std::invalid_argument);
    CHECK_THROWS_AS(w_of_s(1.0, {}, 10), std::invalid_argument);
  }
}

TEST_CASE("minimize_w sentinels and closed-form minimum") {
  SUBCASE("single itemset: infimum zero at s -> 0") {
    auto m = minimize_w({42}, 100);
    CHECK(m.s_star == 0.0);
    CHECK(m.w_star == 0.0);
  }
  SUBCASE("all-zero counts: infimum zero at s -> inf") {
    auto m = minimize_w({0, 0, 0}, 100);
    CHECK(std::isinf(m.s_star));
    CHECK(m.w_star == 0.0);
  }
  SUBCASE("two all-ones itemsets at n=100") {
    auto m = minimize_w({100, 100}, 100);
    // Calculus on ln2/s + s/(2n): s* = sqrt(2n ln2), w* = sqrt(2 ln2 / n).
    // The minimum is flat in s, so s* is located far less precisely than w*.
    CHECK(m.s_star == doctest::Approx(11.774100225154747).epsilon(1e-4));
    CHECK(m.w_star == doctest::Approx(0.11774100225154747).epsilon(1e-12));
    CHECK(m.w_star == doctest::Approx(0.11776).epsilon(2e-4));
  }
  SUBCASE("random instances agree with a dense grid scan") {
    testers::Rng rng(53);
    for (int trial = 0; trial < 6; ++trial) {
      const std::uint64_t n = 2 + rng.uniform_index(11);
      const std::size_t fam = 2 + rng.uniform_index(7);
      std::vector<std::uint64_t> counts(fam);
      bool nonzero = false;
      for (auto& c : counts) {
        c = rng.uniform_index(n + 1);
        nonzero |= c > 0;
      }
      if (!nonzero) counts[0] = 1;

      auto m = minimize_w(counts, n);
      const double lo = std::log(1e-3), hi = std::log(1e6);
      double best = std::numeric_limits<double>::infinity();
      const int points = 100000;
      for (int i = 0; i < points; ++i) {
        const double s = std::exp(lo + (hi - lo) * i / (points - 1.0));
        best = std::min(best, w_of_s(s, counts, n));
      }
      CHECK(m.w_star <= best * (1.0 + 1e-9));
      CHECK(m.w_star >= best * (1.0 - 1e-6));
    }
  }
}

TEST_CASE("delta_one_prime formula") {
  SUBCASE("zero w_star leaves the Hoeffding term") {
    auto in = with_log_count(2, 2.0 - kLn2, 0.0);
    CHECK(delta_one_prime(in, 0.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("reference point at n=100") {
    auto in = BoundInputs::with_count(100, std::log(100.0), 2);
    CHECK(delta_one_prime(in, 0.11774100225154747) ==
          doctest::Approx(0.44326572839529338).epsilon(1e-13));
    CHECK(delta_one_prime(in, 0.11776) == doctest::Approx(0.4434).epsilon(1e-3));
  }
  SUBCASE("shares the second term with delta_one") {
    auto in = BoundInputs::with_count(500, 4.0, 64);
    in.ell = 10.0;
    const double massart_term =
        (2.0 * 10.0 / 500.0) * std::sqrt(2.0 * in.log_function_count);
    CHECK(delta_one_prime(in, massart_term * 0.5) < delta_one(in));
    CHECK(delta_one_prime(in, massart_term) ==
          doctest::Approx(delta_one(in)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(delta_one_prime(with_log_count(10, 1.0, 1.0), -0.1),
                  std::invalid_argument);
}

TEST_CASE("exact Rademacher average on hand-enumerable instances") {
  SUBCASE("single observed itemset is exactly zero by sign symmetry") {
    auto data = testers::dataset_from({{1}, {1, 2}, {2}});
    auto s = full_sample(data);
    CHECK(exact_rademacher(s, ObservedSet({Itemset{1}})) == 0.0);
    CHECK(exact_rademacher_serial(s, ObservedSet({Itemset{1}})) == 0.0);
  }
  SUBCASE("n=2 with indicators (1,1) and (1,0)") {
    auto data = testers::dataset_from({{1, 2}, {1}});
    auto s = full_sample(data);
    ObservedSet obs({Itemset{1}, Itemset{2}});
    // Four sign vectors give maxima 1, 0.5, 0, -0.5; mean 0.25.
    CHECK(exact_rademacher(s, obs) == 0.25);
    CHECK(exact_rademacher_serial(s, obs) == 0.25);
  }
  SUBCASE("refuses n above 20") {
    std::vector<std::vector<ItemId>> rows(21, std::vector<ItemId>{1});
    auto s = full_sample(testers::dataset_from(rows));
    CHECK_THROWS_AS(exact_rademacher(s, ObservedSet({Itemset{1}})),
                    std::invalid_argument);
  }
}

TEST_CASE("parallel and serial Rademacher agree exactly") {
  testers::Rng rng(59);
  for (int trial = 0; trial < 8; ++trial) {
    auto data = testers::random_dataset(rng, 14, 6);
    std::vector<Itemset> fam;
    for (int q = 0; q < 5; ++q) fam.push_back(testers::supported_itemset(rng, data));
    ObservedSet obs(std::move(fam));
    auto s = full_sample(data);
    CHECK(exact_rademacher(s, obs) == exact_rademacher_serial(s, obs));
  }
}

TEST_CASE("Rademacher average sits below both of its upper bounds") {
  testers::Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    auto data = testers::random_dataset(rng, 10, 6);
    const std::size_t fam_size = 2 + rng.uniform_index(5);
    std::vector<Itemset> fam;
    for (std::size_t q = 0; q < fam_size; ++q)
      fam.push_back(testers::supported_itemset(rng, data));
    ObservedSet obs(std::move(fam));
    auto s = full_sample(data);

    const double r = exact_rademacher(s, obs);
    CHECK(r >= 0.0);  // some member has nonzero support and |Ob| >= 2
    CHECK(r <= 1.0);

    const double n = static_cast<double>(s.size());
    const double massart =
        (massart_ell(s, obs) / n) *
        std::sqrt(2.0 * std::log(static_cast<double>(obs.size())));
    CHECK(r <= massart + 1e-12);
    CHECK(r <= minimize_w(s, obs).w_star + 1e-9);
  }
}

TEST_CASE("bound ratio decreases toward two as delta shrinks") {
  const double lnN = 10.0 * kLn2;  // family of 2^10
  const double ell = 10.0;
  const std::uint64_t n = 100;
  const double lids[] = {10.0 * std::log(10.0), 100.0 * std::log(10.0),
                         1e4 * std::log(10.0)};
  const double frozen[] = {3.6615709177550904, 2.6534423474857389,
                           2.069088423452107};
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    auto in = with_log_count(n, lids[i], lnN);
    in.ell = ell;
    const double ratio = delta_one(in) / delta_two(in);
    CHECK(ratio == doctest::Approx(frozen[i]).epsilon(1e-12));
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev > 1.95);
  CHECK(prev < 2.15);
}

TEST_CASE("family restriction tightens delta_two") {
  // |Ob| = 4950 versus the full 2^100 family.
  auto narrow = BoundInputs::with_count(5000, 3.0, 4950);
  auto wide = BoundInputs::with_items(5000, 3.0, 100);
  CHECK(delta_two(narrow) < delta_two(wide));
}

TEST_CASE("bounds are monotone in n and in log(1/delta)") {
  for (std::uint64_t n : {100ull, 1000ull, 10000ull}) {
    for (double lid : {1.0, 6.0, 30.0}) {
      auto in = BoundInputs::with_count(n, lid, 190);
      in.ell = std::sqrt(static_cast<double>(n)) * 0.8;
      auto bigger_n = in;
      bigger_n.n = n * 2;
      bigger_n.ell = std::sqrt(static_cast<double>(2 * n)) * 0.8;
      auto bigger_lid = in;
      bigger_lid.log_inv_delta = lid * 2;

      CHECK(delta_one(bigger_n) < delta_one(in));
      CHECK(delta_two(bigger_n) < delta_two(in));
      CHECK(delta_one(bigger_lid) > delta_one(in));
      CHECK(delta_two(bigger_lid) > delta_two(in));
      CHECK(delta_one_prime(bigger_lid, 0.05) > delta_one_prime(in, 0.05));
    }
  }
}

TEST_CASE("library formulas match the re-derived oracle on a small sweep") {
  for (std::uint64_t n : {128ull, 3683ull, 250000ull}) {
    for (double lid : {2.0, 9.210340371976184, 100.0}) {
      for (double log_count : {0.6931471805599453, 8.506939094329987, 48.5203026391962}) {
        const double ell = 0.5 * std::sqrt(static_cast<double>(n));
        auto in = with_log_count(n, lid, log_count);
        in.ell = ell;
        CHECK(delta_one(in) ==
              doctest::Approx(delta1_oracle(n, lid, log_count, ell)).epsilon(1e-14));
        CHECK(delta_two(in) ==
              doctest::Approx(delta2_oracle(n, lid, log_count)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("with_items carries huge families in log-domain") {
  auto in = BoundInputs::with_items(100000, std::log(100.0), 1000);
  CHECK(in.log_function_count == doctest::Approx(1000.0 * kLn2).epsilon(1e-15));
  CHECK(std::isfinite(delta_two(in)));
  // delta = 10^-10000 stays representable as log_inv_delta.
  auto extreme = with_log_count(100, 10000.0 * std::log(10.0), 10.0 * kLn2);
  extreme.ell = 10.0;
  CHECK(std::isfinite(delta_one(extreme)));
  CHECK(std::isfinite(delta_two(extreme)));
  CHECK_THROWS_AS(BoundInputs::with_count(10, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BoundInputs::with_count(10, -0.5, 10), std::invalid_argument);
}
