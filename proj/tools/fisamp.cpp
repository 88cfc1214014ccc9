#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fisamp/approx.hpp"
#include "fisamp/bounds.hpp"
#include "fisamp/candidates.hpp"
#include "fisamp/dataset.hpp"
#include "fisamp/eval.hpp"
#include "fisamp/support.hpp"
#include "fisamp/topk.hpp"

namespace {

using namespace fisamp;

// One itemset per non-empty line, ids space-separated; '#' starts a comment.
std::vector<Itemset> load_itemsets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<Itemset> sets;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<ItemId> items;
    std::uint64_t id = 0;
    while (ls >> id) items.push_back(static_cast<ItemId>(id));
    if (!ls.eof()) throw std::runtime_error(path + ": non-integer item id");
    if (!items.empty()) sets.push_back(Itemset(std::move(items)));
  }
  if (sets.empty()) throw std::runtime_error(path + ": no itemsets");
  return sets;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

double resolve_log_inv_delta(const CLI::App* cmd, double delta,
                             double log_inv_delta, double fallback_delta) {
  if (cmd->count("--log-inv-delta")) return log_inv_delta;
  if (cmd->count("--delta")) {
    if (!(delta > 0.0) || delta >= 1.0)
      throw CLI::ValidationError("--delta must be in (0,1)");
    return -std::log(delta);
  }
  return -std::log(fallback_delta);
}

std::vector<std::uint64_t> log_spaced_grid(std::uint64_t n_min, std::uint64_t n_max,
                                           std::uint64_t points) {
  if (n_min == 0 || n_max < n_min || points == 0)
    throw CLI::ValidationError("need 1 <= n-min <= n-max and points >= 1");
  std::vector<std::uint64_t> grid;
  if (points == 1) {
    grid.push_back(n_min);
    return grid;
  }
  const double lo = std::log(static_cast<double>(n_min));
  const double hi = std::log(static_cast<double>(n_max));
  for (std::uint64_t i = 0; i < points; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    const auto n = static_cast<std::uint64_t>(std::llround(std::exp(t)));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

struct CommonBoundArgs {
  std::uint64_t n = 0;
  double delta = 0.0;
  double log_inv_delta = 0.0;
  double count = 0.0;
  std::uint64_t items = 0;
  double ell = 0.0;
};

void add_family_flags(CLI::App* cmd, CommonBoundArgs& a) {
  auto* count_opt = cmd->add_option("--count", a.count, "observed family size N");
  auto* items_opt =
      cmd->add_option("--items", a.items, "item count; family size N = 2^items");
  count_opt->excludes(items_opt);
  items_opt->excludes(count_opt);
}

double family_log_count(const CLI::App* cmd, const CommonBoundArgs& a) {
  constexpr double kLn2 = 0.6931471805599453;
  if (cmd->count("--items")) return static_cast<double>(a.items) * kLn2;
  if (cmd->count("--count")) {
    if (!(a.count >= 1.0)) throw CLI::ValidationError("--count must be >= 1");
    return std::log(a.count);
  }
  throw CLI::ValidationError("one of --count or --items is required");
}

void write_bound_row(std::ostream& out, const BoundInputs& in,
                     std::optional<double> d1, std::optional<double> d1p,
                     double d2) {
  out << in.n << ',' << in.log_inv_delta << ',' << std::exp(in.log_function_count)
      << ',';
  if (in.ell) out << *in.ell;
  out << ',';
  if (d1) out << *d1;
  out << ',';
  if (d1p) out << *d1p;
  out << ',' << d2 << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"itemset frequency approximation by sampling"};
  app.require_subcommand(1);

  // ---- bounds ----------------------------------------------------------
  auto bounds_args = std::make_shared<CommonBoundArgs>();
  auto bounds_extra = std::make_shared<std::vector<std::string>>(3);  // input, observed, out
  auto bounds_seed = std::make_shared<std::uint64_t>(0);
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "worst-case error bounds for one n");
  bounds_cmd->add_option("--n", bounds_args->n, "sample size")->required();
  bounds_cmd->add_option("--delta", bounds_args->delta, "failure probability");
  bounds_cmd->add_option("--log-inv-delta", bounds_args->log_inv_delta,
                         "ln(1/delta), for extreme delta");
  add_family_flags(bounds_cmd, *bounds_args);
  bounds_cmd->add_option("--ell", bounds_args->ell, "largest indicator l2-norm");
  bounds_cmd->add_option("--input", (*bounds_extra)[0],
                         "FIMI dataset; with --observed, computes ell and the "
                         "w-based bound from a drawn sample");
  bounds_cmd->add_option("--observed", (*bounds_extra)[1], "observed itemsets file");
  bounds_cmd->add_option("--seed", *bounds_seed, "sample seed");
  bounds_cmd->add_option("--out", (*bounds_extra)[2], "output CSV (default stdout)");
  bounds_cmd->callback([=]() {
    BoundInputs in;
    in.n = bounds_args->n;
    in.log_inv_delta = resolve_log_inv_delta(bounds_cmd, bounds_args->delta,
                                             bounds_args->log_inv_delta, 1e-4);
    in.log_function_count = family_log_count(bounds_cmd, *bounds_args);
    if (bounds_cmd->count("--ell")) in.ell = bounds_args->ell;

    std::optional<double> d1p;
    if (!(*bounds_extra)[0].empty() && !(*bounds_extra)[1].empty()) {
      const TransactionDataset data = load_fimi((*bounds_extra)[0]);
      const ObservedSet observed(load_itemsets((*bounds_extra)[1]));
      const Sample sample = in.n >= data.size()
                                ? full_sample(data)
                                : draw_sample(data, in.n, *bounds_seed, true);
      if (!in.ell) in.ell = massart_ell(sample, observed);
      d1p = delta_one_prime(in, minimize_w(sample, observed).w_star);
    }
    std::optional<double> d1;
    if (in.ell) d1 = delta_one(in);
    Output out((*bounds_extra)[2]);
    out.stream() << "n,log_inv_delta,count,ell,delta1,delta1_prime,delta2\n"
                 << std::setprecision(17);
    write_bound_row(out.stream(), in, d1, d1p, delta_two(in));
  });

  // ---- bounds-sweep ----------------------------------------------------
  auto sweep_args = std::make_shared<CommonBoundArgs>();
  auto sweep_grid = std::make_shared<std::vector<std::uint64_t>>(3, 0);
  auto sweep_rule = std::make_shared<std::string>("sqrt_n");
  auto sweep_out = std::make_shared<std::string>();
  CLI::App* sweep_cmd =
      app.add_subcommand("bounds-sweep", "bound rows over a log-spaced n grid");
  sweep_cmd->add_option("--n-min", (*sweep_grid)[0], "grid start")->required();
  sweep_cmd->add_option("--n-max", (*sweep_grid)[1], "grid end")->required();
  sweep_cmd->add_option("--points", (*sweep_grid)[2], "grid points")->default_val(50);
  sweep_cmd->add_option("--delta", sweep_args->delta, "failure probability");
  sweep_cmd->add_option("--log-inv-delta", sweep_args->log_inv_delta, "ln(1/delta)");
  add_family_flags(sweep_cmd, *sweep_args);
  sweep_cmd->add_option("--ell-rule", *sweep_rule, "sqrt_n or fixed")
      ->check(CLI::IsMember({"sqrt_n", "fixed"}));
  sweep_cmd->add_option("--ell", sweep_args->ell, "ell when --ell-rule=fixed");
  sweep_cmd->add_option("--out", *sweep_out, "output CSV (default stdout)");
  sweep_cmd->callback([=]() {
    const double lid = resolve_log_inv_delta(sweep_cmd, sweep_args->delta,
                                             sweep_args->log_inv_delta, 1e-4);
    const double log_count = family_log_count(sweep_cmd, *sweep_args);
    const auto grid =
        log_spaced_grid((*sweep_grid)[0], (*sweep_grid)[1], (*sweep_grid)[2]);
    Output out(*sweep_out);
    out.stream() << "n,log_inv_delta,count,ell,delta1,delta1_prime,delta2\n"
                 << std::setprecision(17);
    for (std::uint64_t n : grid) {
      BoundInputs in;
      in.n = n;
      in.log_inv_delta = lid;
      in.log_function_count = log_count;
      in.ell = *sweep_rule == "sqrt_n" ? std::sqrt(static_cast<double>(n))
                                       : sweep_args->ell;
      write_bound_row(out.stream(), in, delta_one(in), std::nullopt, delta_two(in));
    }
  });

  // ---- curves ----------------------------------------------------------
  auto curve_grid = std::make_shared<std::vector<std::uint64_t>>(3, 0);
  auto curve_delta = std::make_shared<std::vector<double>>(2, 0.0);  // delta, lid
  auto curve_counts = std::make_shared<std::vector<double>>(2, 0.0);
  auto curve_items = std::make_shared<std::vector<std::uint64_t>>(2, 0);
  auto curve_rule = std::make_shared<std::string>("sqrt_n");
  auto curve_ell = std::make_shared<double>(0.0);
  auto curve_out = std::make_shared<std::string>();
  CLI::App* curves_cmd =
      app.add_subcommand("curves", "figure-style bound curves for two family sizes");
  curves_cmd->add_option("--n-min", (*curve_grid)[0], "grid start")->required();
  curves_cmd->add_option("--n-max", (*curve_grid)[1], "grid end")->required();
  curves_cmd->add_option("--points", (*curve_grid)[2], "grid points")->default_val(50);
  curves_cmd->add_option("--delta", (*curve_delta)[0], "failure probability");
  curves_cmd->add_option("--log-inv-delta", (*curve_delta)[1], "ln(1/delta)");
  auto* ca = curves_cmd->add_option("--count-a", (*curve_counts)[0], "first family size");
  auto* cb = curves_cmd->add_option("--count-b", (*curve_counts)[1], "second family size");
  auto* ia = curves_cmd->add_option("--items-a", (*curve_items)[0],
                                    "first family as 2^items");
  auto* ib = curves_cmd->add_option("--items-b", (*curve_items)[1],
                                    "second family as 2^items");
  ca->excludes(ia);
  ia->excludes(ca);
  cb->excludes(ib);
  ib->excludes(cb);
  curves_cmd->add_option("--ell-rule", *curve_rule, "sqrt_n or fixed")
      ->check(CLI::IsMember({"sqrt_n", "fixed"}));
  curves_cmd->add_option("--ell", *curve_ell, "ell when --ell-rule=fixed");
  curves_cmd->add_option("--out", *curve_out, "output CSV (default stdout)");
  curves_cmd->callback([=]() {
    constexpr double kLn2 = 0.6931471805599453;
    const double lid = resolve_log_inv_delta(curves_cmd, (*curve_delta)[0],
                                             (*curve_delta)[1], 1e-4);
    auto pick = [&](const char* count_flag, const char* items_flag, double count,
                    std::uint64_t items) {
      if (curves_cmd->count(items_flag)) return static_cast<double>(items) * kLn2;
      if (curves_cmd->count(count_flag)) {
        if (!(count >= 1.0)) throw CLI::ValidationError("family size must be >= 1");
        return std::log(count);
      }
      throw CLI::ValidationError(std::string("missing ") + count_flag + " or " +
                                 items_flag);
    };
    const double log_a =
        pick("--count-a", "--items-a", (*curve_counts)[0], (*curve_items)[0]);
    const double log_b =
        pick("--count-b", "--items-b", (*curve_counts)[1], (*curve_items)[1]);
    const auto grid =
        log_spaced_grid((*curve_grid)[0], (*curve_grid)[1], (*curve_grid)[2]);
    Output out(*curve_out);
    emit_bound_curves(grid, lid, log_a, log_b,
                      *curve_rule == "sqrt_n" ? EllRule::sqrt_n : EllRule::fixed,
                      *curve_ell, out.stream());
  });

  // ---- approx ----------------------------------------------------------
  auto approx_paths = std::make_shared<std::vector<std::string>>(3);
  auto approx_cfg = std::make_shared<ApproxConfig>();
  auto approx_delta = std::make_shared<std::vector<double>>(2, 0.0);
  CLI::App* approx_cmd = app.add_subcommand(
      "approx", "fixed-sample-size frequency approximation");
  approx_cmd->add_option("--input", (*approx_paths)[0], "FIMI dataset")->required();
  approx_cmd->add_option("--observed", (*approx_paths)[1],
                         "observed itemsets file; omitted: all subsets");
  approx_cmd->add_option("--epsilon", approx_cfg->epsilon, "error bound")
      ->default_val(0.05);
  approx_cmd->add_option("--delta", (*approx_delta)[0], "failure probability");
  approx_cmd->add_option("--log-inv-delta", (*approx_delta)[1], "ln(1/delta)");
  approx_cmd->add_option("--seed", approx_cfg->seed, "sample seed");
  approx_cmd->add_option("--out", (*approx_paths)[2], "output CSV (default stdout)");
  approx_cmd->callback([=]() {
    approx_cfg->log_inv_delta = resolve_log_inv_delta(
        approx_cmd, (*approx_delta)[0], (*approx_delta)[1], 1e-4);
    const TransactionDataset data = load_fimi((*approx_paths)[0]);
    ApproxResult result;
    if ((*approx_paths)[1].empty()) {
      result = approximate_all(data, *approx_cfg);
    } else {
      const ObservedSet observed(load_itemsets((*approx_paths)[1]));
      result = approximate_observed(data, observed, *approx_cfg);
    }
    Output out((*approx_paths)[2]);
    write_estimates_csv(result.estimates, out.stream());
    out.stream() << "n,elapsed_sec,full_dataset\n"
                 << result.sample_size_used << ',' << result.elapsed_sec << ','
                 << (result.full_dataset_used ? 1 : 0) << '\n';
  });

  // ---- topk ------------------------------------------------------------
  auto topk_paths = std::make_shared<std::vector<std::string>>(3);
  auto topk_cfg = std::make_shared<TopKConfig>();
  auto topk_delta = std::make_shared<std::vector<double>>(2, 0.0);
  CLI::App* topk_cmd =
      app.add_subcommand("topk", "progressive top-k frequency approximation");
  topk_cmd->add_option("--input", (*topk_paths)[0], "FIMI dataset")->required();
  topk_cmd->add_option("--observed", (*topk_paths)[1], "observed itemsets file")
      ->required();
  topk_cmd->add_option("--k", topk_cfg->k, "ranks wanted")->required();
  topk_cmd->add_option("--batch", topk_cfg->batch_size, "sample increment")
      ->default_val(100);
  topk_cmd->add_option("--epsilon", topk_cfg->epsilon, "error bound")
      ->default_val(0.05);
  topk_cmd->add_option("--delta", (*topk_delta)[0], "failure probability");
  topk_cmd->add_option("--log-inv-delta", (*topk_delta)[1], "ln(1/delta)");
  topk_cmd->add_option("--seed", topk_cfg->seed, "sample seed");
  topk_cmd->add_option("--out", (*topk_paths)[2], "output CSV (default stdout)");
  topk_cmd->callback([=]() {
    topk_cfg->log_inv_delta = resolve_log_inv_delta(topk_cmd, (*topk_delta)[0],
                                                    (*topk_delta)[1], 1e-4);
    const TransactionDataset data = load_fimi((*topk_paths)[0]);
    const ObservedSet observed(load_itemsets((*topk_paths)[1]));
    const TopKResult result = topk_progressive(data, observed, *topk_cfg);
    Output out((*topk_paths)[2]);
    out.stream() << "itemset,estimate\n" << std::setprecision(17);
    for (const auto& [itemset, freq] : result.selected)
      out.stream() << format_itemset(itemset) << ',' << freq << '\n';
    out.stream() << "rounds,final_n,stopped_by,stop_metric\n"
                 << result.rounds << ',' << result.final_n << ','
                 << to_string(result.stopped_by) << ',' << result.stop_metric
                 << '\n';
  });

  // ---- candidates ------------------------------------------------------
  auto cand_paths = std::make_shared<std::vector<std::string>>(2);
  auto cand_cfg = std::make_shared<CandidatePipelineConfig>();
  auto cand_delta = std::make_shared<std::vector<double>>(2, 0.0);
  CLI::App* cand_cmd = app.add_subcommand(
      "candidates", "two-pass exact frequent-pair candidate generation");
  cand_cmd->add_option("--input", (*cand_paths)[0], "FIMI dataset")->required();
  cand_cmd->add_option("--k", cand_cfg->k, "threshold rank")->required();
  cand_cmd->add_option("--chunks", cand_cfg->chunk_count, "partition count")
      ->default_val(8);
  cand_cmd->add_option("--epsilon", cand_cfg->epsilon, "pass-1 error bound")
      ->default_val(0.05);
  cand_cmd->add_option("--delta", (*cand_delta)[0], "failure probability");
  cand_cmd->add_option("--log-inv-delta", (*cand_delta)[1], "ln(1/delta)");
  cand_cmd->add_option("--seed", cand_cfg->seed, "pass-1 sample seed");
  cand_cmd->add_option("--out", (*cand_paths)[1], "output CSV (default stdout)");
  cand_cmd->callback([=]() {
    cand_cfg->log_inv_delta = resolve_log_inv_delta(cand_cmd, (*cand_delta)[0],
                                                    (*cand_delta)[1], 1e-4);
    const TransactionDataset data = load_fimi((*cand_paths)[0]);
    const CandidateReport report = build_observed_pairs(data, *cand_cfg);
    Output out((*cand_paths)[1]);
    out.stream() << "pair\n";
    for (const Itemset& pair : report.candidate_pairs)
      out.stream() << format_itemset(pair) << '\n';
    out.stream() << "threshold,frequent_items,candidate_pairs,chunks\n"
                 << std::setprecision(17) << report.threshold << ','
                 << report.frequent_items.size() << ','
                 << report.candidate_pairs.size() << ','
                 << report.chunk_counts.size() << '\n';
    out.stream() << "# chunk_candidates=";
    for (std::size_t i = 0; i < report.chunk_counts.size(); ++i)
      out.stream() << (i ? "|" : "") << report.chunk_counts[i];
    out.stream() << '\n';
  });

  // ---- eval ------------------------------------------------------------
  auto eval_paths = std::make_shared<std::vector<std::string>>(2);
  auto eval_cfg = std::make_shared<EvalConfig>();
  auto eval_algo = std::make_shared<std::string>("both");
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "end-to-end pipelines with precision against the exact oracle");
  eval_cmd->add_option("--input", (*eval_paths)[0], "FIMI dataset")->required();
  eval_cmd->add_option("--algo", *eval_algo, "precomputed, progressive, or both")
      ->check(CLI::IsMember({"precomputed", "progressive", "both"}));
  eval_cmd->add_option("--trials", eval_cfg->trials, "trial count")->default_val(10);
  eval_cmd->add_option("--k", eval_cfg->k, "ranks wanted")->default_val(10);
  eval_cmd->add_option("--item-limit", eval_cfg->item_limit,
                       "keep only this many smallest item ids")
      ->default_val(70);
  eval_cmd->add_option("--epsilon", eval_cfg->epsilon, "error bound")
      ->default_val(0.05);
  eval_cmd->add_option("--delta", eval_cfg->delta, "failure probability")
      ->default_val(1e-4);
  eval_cmd->add_option("--batch", eval_cfg->batch, "progressive sample increment")
      ->default_val(100);
  eval_cmd->add_option("--seeds", eval_cfg->seeds,
                       "explicit trial seeds (overrides --trials)");
  eval_cmd->add_option("--cache-dir", eval_cfg->cache_dir, "exact-oracle cache");
  eval_cmd->add_option("--out", (*eval_paths)[1], "output CSV (default stdout)");
  eval_cmd->callback([=]() {
    const TransactionDataset data = load_fimi((*eval_paths)[0]);
    if (!eval_cfg->seeds.empty()) eval_cfg->trials = eval_cfg->seeds.size();
    std::vector<EvalRow> rows;
    if (*eval_algo != "progressive") {
      auto r = run_pipeline(data, *eval_cfg, EvalAlgorithm::precomputed);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (*eval_algo != "precomputed") {
      auto r = run_pipeline(data, *eval_cfg, EvalAlgorithm::progressive);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    Output out((*eval_paths)[1]);
    write_eval_csv(rows, eval_cfg->item_limit, out.stream());
    std::cerr << "eval: item_limit=" << eval_cfg->item_limit << ", "
              << rows.size() << " rows\n";
  });

  // ---- gen -------------------------------------------------------------
  auto gen_paths = std::make_shared<std::vector<std::string>>(2);
  auto gen_seed = std::make_shared<std::uint64_t>(0);
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate synthetic FIMI data from a spec file");
  gen_cmd->add_option("--spec", (*gen_paths)[0], "generator spec file")->required();
  gen_cmd->add_option("--seed", *gen_seed, "generator seed");
  gen_cmd->add_option("--out", (*gen_paths)[1], "FIMI output (default stdout)");
  gen_cmd->callback([=]() {
    const SyntheticSpec spec = load_synthetic_spec((*gen_paths)[0]);
    const TransactionDataset data = generate_synthetic(spec, *gen_seed);
    Output out((*gen_paths)[1]);
    write_fimi(data, out.stream());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "fisamp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
