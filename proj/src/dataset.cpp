#include "fisamp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "fisamp/rng.hpp"

namespace fisamp {

namespace {

[[noreturn]] void parse_fail(const std::string& name, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
}

// Accepts only base-10 digits; rejects anything that does not fit ItemId.
ItemId parse_item_token(const std::string& token, const std::string& name,
                        std::size_t line_no) {
  if (token.empty()) parse_fail(name, line_no, "empty token");
  std::uint64_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9')
      parse_fail(name, line_no, "non-integer token '" + token + "'");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > std::numeric_limits<ItemId>::max())
      parse_fail(name, line_no, "item id out of 32-bit range: '" + token + "'");
  }
  return static_cast<ItemId>(value);
}

void split_ws(const std::string& line, std::vector<std::string>& tokens) {
  tokens.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
}

std::string strip_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                           line.back() == '\t'))
    line.pop_back();
  return line;
}

}  // namespace

TransactionDataset load_fimi(std::istream& in, const std::string& name) {
  TransactionDataset dataset;
  dataset.source_name = name;
  std::set<ItemId> universe;
  std::string line;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;  // empty lines are skipped, not transactions
    split_ws(line, tokens);
    if (tokens.empty()) continue;
    std::vector<ItemId> items;
    items.reserve(tokens.size());
    for (const auto& t : tokens) items.push_back(parse_item_token(t, name, line_no));
    Transaction tau = make_transaction(std::move(items));
    universe.insert(tau.begin(), tau.end());
    dataset.transactions.push_back(std::move(tau));
  }
  if (dataset.transactions.empty())
    throw std::runtime_error(name + ": no transactions parsed");
  dataset.item_universe.assign(universe.begin(), universe.end());
  return dataset;
}

TransactionDataset load_fimi(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_fimi(in, path);
}

void write_fimi(const TransactionDataset& dataset, std::ostream& out) {
  for (const Transaction& tau : dataset.transactions) {
    if (tau.empty()) continue;  // an empty line would be skipped on reload
    for (std::size_t i = 0; i < tau.size(); ++i) {
      if (i) out << ' ';
      out << tau[i];
    }
    out << '\n';
  }
}

void write_fimi(const TransactionDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_fimi(dataset, out);
}

std::string to_fimi_string(const TransactionDataset& dataset) {
  std::ostringstream out;
  write_fimi(dataset, out);
  return out.str();
}

void SyntheticSpec::validate() const {
  if (transaction_count == 0)
    throw std::invalid_argument("synthetic spec: transaction count must be >= 1");
  std::unordered_map<ItemId, double> marginal;
  for (const auto& [id, p] : item_marginals) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("synthetic spec: marginal out of [0,1] for item " +
                                  std::to_string(id));
    if (!marginal.emplace(id, p).second)
      throw std::invalid_argument("synthetic spec: duplicate item " + std::to_string(id));
  }
  std::unordered_set<ItemId> paired;
  for (const auto& pp : planted_pairs) {
    if (pp.a == pp.b)
      throw std::invalid_argument("synthetic spec: pair with identical items");
    auto ia = marginal.find(pp.a);
    auto ib = marginal.find(pp.b);
    if (ia == marginal.end() || ib == marginal.end())
      throw std::invalid_argument("synthetic spec: pair references item without a marginal");
    if (!(pp.joint >= 0.0 && pp.joint <= 1.0))
      throw std::invalid_argument("synthetic spec: joint probability out of [0,1]");
    if (pp.joint > std::min(ia->second, ib->second) + 1e-12)
      throw std::invalid_argument("synthetic spec: joint above an item marginal");
    if (pp.joint < ia->second + ib->second - 1.0 - 1e-12)
      throw std::invalid_argument("synthetic spec: joint below Frechet lower bound");
    if (!paired.insert(pp.a).second || !paired.insert(pp.b).second)
      throw std::invalid_argument("synthetic spec: item appears in more than one pair");
  }
}

SyntheticSpec parse_synthetic_spec(std::istream& in, const std::string& name) {
  SyntheticSpec spec;
  std::string line;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  bool saw_count = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = strip_cr(line);
    if (line.empty()) continue;
    split_ws(line, tokens);
    if (tokens.empty()) continue;
    const std::string& kind = tokens[0];
    try {
      if (kind == "item" && tokens.size() == 3) {
        spec.item_marginals.emplace_back(parse_item_token(tokens[1], name, line_no),
                                         std::stod(tokens[2]));
      } else if (kind == "pair" && tokens.size() == 4) {
        spec.planted_pairs.push_back({parse_item_token(tokens[1], name, line_no),
                                      parse_item_token(tokens[2], name, line_no),
                                      std::stod(tokens[3])});
      } else if (kind == "count" && tokens.size() == 2) {
        spec.transaction_count = std::stoull(tokens[1]);
        saw_count = true;
      } else {
        parse_fail(name, line_no, "unrecognized directive '" + kind + "'");
      }
    } catch (const std::invalid_argument&) {
      parse_fail(name, line_no, "malformed number");
    } catch (const std::out_of_range&) {
      parse_fail(name, line_no, "number out of range");
    }
  }
  if (!saw_count) throw std::runtime_error(name + ": missing 'count' directive");
  spec.validate();
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_synthetic_spec(in, path);
}

TransactionDataset generate_synthetic(const SyntheticSpec& spec,
                                      std::uint64_t seed) {
  spec.validate();
  std::unordered_map<ItemId, double> marginal;
  for (const auto& [id, p] : spec.item_marginals) marginal[id] = p;

  std::unordered_set<ItemId> paired;
  for (const auto& pp : spec.planted_pairs) {
    paired.insert(pp.a);
    paired.insert(pp.b);
  }
  // Draw order is fixed: pairs as listed, then unpaired items as listed.
  std::vector<std::pair<ItemId, double>> solo;
  for (const auto& [id, p] : spec.item_marginals)
    if (!paired.count(id)) solo.emplace_back(id, p);

  TransactionDataset dataset;
  dataset.source_name = "synthetic";
  dataset.transactions.reserve(spec.transaction_count);
  Rng rng(seed);
  std::vector<ItemId> items;
  for (std::uint64_t t = 0; t < spec.transaction_count; ++t) {
    items.clear();
    for (const auto& pp : spec.planted_pairs) {
      // One uniform covers the pair's joint law:
      //   [0, joint) -> both, [joint, pa) -> a only,
      //   [pa, pa + pb - joint) -> b only, rest -> neither.
      double u = rng.uniform01();
      double pa = marginal[pp.a];
      double pb = marginal[pp.b];
      if (u < pp.joint) {
        items.push_back(pp.a);
        items.push_back(pp.b);
      } else if (u < pa) {
        items.push_back(pp.a);
      } else if (u < pa + pb - pp.joint) {
        items.push_back(pp.b);
      }
    }
    for (const auto& [id, p] : solo) {
      if (rng.uniform01() < p) items.push_back(id);
    }
    dataset.transactions.push_back(make_transaction(items));
  }

  std::set<ItemId> universe;
  for (const auto& [id, p] : spec.item_marginals) universe.insert(id);
  dataset.item_universe.assign(universe.begin(), universe.end());
  return dataset;
}

Sample full_sample(const TransactionDataset& dataset) {
  if (dataset.transactions.empty())
    throw std::invalid_argument("cannot sample an empty dataset");
  Sample s;
  s.transactions = dataset.transactions;
  s.seed = 0;
  s.replacement = false;
  s.source_size = dataset.size();
  return s;
}

Sample draw_sample(const TransactionDataset& dataset, std::uint64_t n,
                   std::uint64_t seed, bool replacement) {
  if (dataset.transactions.empty())
    throw std::invalid_argument("cannot sample an empty dataset");
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");

  const std::uint64_t d = dataset.size();
  Sample s;
  s.seed = seed;
  s.replacement = replacement;
  s.source_size = d;

  if (!replacement && n >= d) {
    s.transactions = dataset.transactions;  // step-3 fallback: S <- D
    return s;
  }

  Rng rng(seed);
  s.transactions.reserve(n);
  if (replacement) {
    for (std::uint64_t i = 0; i < n; ++i)
      s.transactions.push_back(dataset.transactions[rng.uniform_index(d)]);
  } else {
    // Partial Fisher-Yates over an index array; n < d here.
    std::vector<std::uint64_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t j = i + rng.uniform_index(d - i);
      std::swap(idx[i], idx[j]);
      s.transactions.push_back(dataset.transactions[idx[i]]);
    }
  }
  return s;
}

}  // namespace fisamp
