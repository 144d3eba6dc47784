#include "treedist/cli.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "treedist/newick.hpp"
#include "treedist/posets.hpp"

namespace treedist::cli {

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "tsv") return OutputFormat::tsv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

std::vector<WeightedTree> load_trees(const std::string& path, std::optional<double> default_length) {
  auto raw = read_newick_file(path, default_length);
  if (raw.empty()) throw NewickError("no trees in '" + path + "'");
  auto taxa = std::make_shared<const TaxaMap>(build_taxa_map(raw));
  std::vector<WeightedTree> trees;
  trees.reserve(raw.size());
  for (const auto& r : raw) trees.push_back(splits_of_tree(r, taxa));
  return trees;
}

std::vector<std::vector<double>> distance_matrix(const std::vector<WeightedTree>& trees,
                                                 const GeoOptions& opts, unsigned threads) {
  const std::size_t n = trees.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) jobs.emplace_back(i, j);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, jobs.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      auto [i, j] = jobs[k];
      try {
        const double d = geodesic_distance(trees[i], trees[j], opts).distance;
        m[i][j] = d;
        m[j][i] = d;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return m;
}

std::string format_distance(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", d);
  return buf;
}

void write_matrix(std::ostream& out, const std::vector<std::vector<double>>& m, OutputFormat fmt) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j] != m[j][i] || (i == j && m[i][j] != 0.0))
        throw std::logic_error("distance matrix is not symmetric with zero diagonal");

  if (fmt == OutputFormat::json) {
    nlohmann::json j;
    j["size"] = n;
    j["matrix"] = m;
    out << j.dump(2) << '\n';
    return;
  }
  const char sep = fmt == OutputFormat::csv ? ',' : '\t';
  for (std::size_t j = 0; j < n; ++j) out << sep << j;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << i;
    for (std::size_t j = 0; j < n; ++j) out << sep << format_distance(m[i][j]);
    out << '\n';
  }
}

namespace {

GeoOptions options_from(const CliConfig& config) {
  GeoOptions o;
  o.algorithm = config.algorithm;
  o.include_leaves = config.include_leaves;
  o.chain_cap = config.chain_cap;
  return o;
}

std::pair<std::size_t, std::size_t> select_pair(const CliConfig& config, std::size_t count) {
  if (config.pair) {
    auto [i, j] = *config.pair;
    if (i >= count || j >= count)
      throw std::invalid_argument("--pair index out of range (file has " + std::to_string(count) +
                                  " trees)");
    return *config.pair;
  }
  if (count != 2)
    throw std::invalid_argument("expected exactly 2 trees, found " + std::to_string(count) +
                                "; use --pair I J");
  return {0, 1};
}

void print_split_list(std::ostream& out, const WeightedSplitSet& set) {
  for (const auto& w : set) out << "  " << w.split.to_string() << '\t' << w.length << '\n';
}

std::string join_splits(const std::vector<Split>& splits) {
  std::string s;
  for (std::size_t i = 0; i < splits.size(); ++i) s += (i ? " " : "") + splits[i].to_string();
  return s;
}

}  // namespace

void run_dist(const CliConfig& config, std::ostream& out) {
  auto trees = load_trees(config.input, config.default_length);
  auto [i, j] = select_pair(config, trees.size());
  Geodesic g = geodesic_distance(trees[i], trees[j], options_from(config));
  out << format_distance(g.distance) << '\n';
  if (!config.verbose) return;
  out << "algorithm " << to_string(g.algorithm) << '\n';
  out << "common splits " << g.common.size() << '\n';
  for (const auto& c : g.common)
    out << "  " << c.split.to_string() << '\t' << c.length_first << '\t' << c.length_second << '\n';
  out << "carrier " << g.carrier.size() << " blocks\n";
  for (std::size_t k = 0; k < g.carrier.size(); ++k)
    out << "  " << k + 1 << ": " << describe(g.carrier[k]) << '\n';
  if (config.include_leaves) out << "leaf term " << g.leaf_term << '\n';
}

void run_matrix(const CliConfig& config, std::ostream& out) {
  auto trees = load_trees(config.input, config.default_length);
  if (trees.size() < 2) throw std::invalid_argument("matrix needs at least 2 trees");
  auto m = distance_matrix(trees, options_from(config), config.threads);
  if (config.out_path) {
    std::ofstream file(*config.out_path);
    if (!file) throw std::runtime_error("cannot write '" + *config.out_path + "'");
    write_matrix(file, m, config.output);
  } else {
    write_matrix(out, m, config.output);
  }
}

void run_splits(const CliConfig& config, std::ostream& out) {
  auto trees = load_trees(config.input, config.default_length);
  if (trees.size() != 2) throw std::invalid_argument("splits needs exactly 2 trees");
  const auto& t1 = trees[0].splits();
  const auto& t2 = trees[1].splits();
  out << "tree 0 splits " << t1.size() << '\n';
  print_split_list(out, t1);
  out << "tree 1 splits " << t2.size() << '\n';
  print_split_list(out, t2);
  auto common = common_splits(trees[0], trees[1]);
  out << "common splits " << common.size() << '\n';
  for (const auto& c : common) out << "  " << c.to_string() << '\n';

  WeightedSplitSet r1 = t1, r2 = t2;
  for (const auto& c : common) {
    r1.erase(c);
    r2.erase(c);
  }
  IncompatibilityPoset poset(r1, r2);
  auto minimal = poset.minimal_classes();
  out << "incompatibility poset " << poset.classes().size() << " classes, " << minimal.size()
      << " minimal\n";
  for (std::size_t c = 0; c < poset.classes().size(); ++c) {
    const auto& cls = poset.classes()[c];
    bool is_min = std::find(minimal.begin(), minimal.end(), c) != minimal.end();
    out << "  class " << c << ": {" << join_splits(poset.second_splits(cls.members)) << "} crossing {"
        << join_splits(poset.first_splits(cls.crossing)) << "}" << (is_min ? " minimal" : "") << '\n';
  }
  if (config.dot) {
    out << "digraph incompatibility {\n  rankdir=BT;\n";
    for (std::size_t c = 0; c < poset.classes().size(); ++c) {
      const auto& cls = poset.classes()[c];
      out << "  c" << c << " [label=\"" << join_splits(poset.second_splits(cls.members))
          << "\\nX: " << join_splits(poset.first_splits(cls.crossing)) << "\"];\n";
    }
    for (auto [lo, hi] : poset.hasse_edges()) out << "  c" << lo << " -> c" << hi << ";\n";
    out << "}\n";
  }
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::dist: run_dist(config, out); break;
      case Command::matrix: run_matrix(config, out); break;
      case Command::splits: run_splits(config, out); break;
    }
    return kExitOk;
  } catch (const TaxaMismatchError& e) {
    err << "treedist: " << e.what() << '\n';
    return kExitTaxaMismatch;
  } catch (const ChainCapExceeded& e) {
    err << "treedist: " << e.what() << '\n';
    return kExitChainCap;
  } catch (const std::exception& e) {
    err << "treedist: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace treedist::cli
