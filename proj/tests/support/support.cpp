#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace support {

using treedist::Bitset;
using treedist::Split;

std::shared_ptr<const treedist::TaxaMap> numbered_taxa(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) {
    std::string s = std::to_string(i);
    names.push_back("t" + std::string(s.size() < 2 ? 1 : 0, '0') + s);
  }
  return std::make_shared<const treedist::TaxaMap>(std::move(names));
}

double uniform_length(std::mt19937_64& rng) {
  // (0,1]: flip the half-open [0,1)
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

namespace {

// parent[v] for a rooted binary tree; leaves are 1..n, root is node 0.
std::vector<Bitset> random_clusters(std::size_t n, std::mt19937_64& rng) {
  // node ids: leaves 1..n, internal nodes n+1.., root 0 (a virtual node above
  // the topmost internal node, so the root edge is an ordinary edge).
  std::vector<int> parent(2 * n + 1, -1);
  int next_internal = static_cast<int>(n) + 1;
  auto attach = [&](int child, int new_parent) { parent[child] = new_parent; };
  // start: leaves 1 and 2 under internal node, which hangs from root 0
  int top = next_internal++;
  attach(1, top);
  attach(2, top);
  attach(top, 0);
  std::vector<int> edges{1, 2, top};  // identified by child endpoint
  for (std::size_t leaf = 3; leaf <= n; ++leaf) {
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    const int child = edges[pick(rng)];
    const int mid = next_internal++;
    attach(mid, parent[child]);
    attach(child, mid);
    attach(static_cast<int>(leaf), mid);
    edges.push_back(mid);
    edges.push_back(static_cast<int>(leaf));
  }
  std::vector<Bitset> clusters;
  for (int v = static_cast<int>(n) + 1; v < next_internal; ++v) {
    Bitset b(n + 1);
    for (std::size_t leaf = 1; leaf <= n; ++leaf) {
      int u = static_cast<int>(leaf);
      while (u != 0 && u != v) u = parent[u];
      if (u == v) b.set(leaf);
    }
    if (b.count() >= 2 && b.count() <= n - 1) clusters.push_back(b);
  }
  return clusters;
}

}  // namespace

WeightedSplitSet random_split_set(std::size_t n, std::mt19937_64& rng) {
  std::vector<treedist::WeightedSplit> entries;
  for (auto& c : random_clusters(n, rng)) entries.push_back({Split(c), uniform_length(rng)});
  return WeightedSplitSet(n, std::move(entries));
}

WeightedTree random_tree(std::size_t n, std::mt19937_64& rng,
                         std::shared_ptr<const treedist::TaxaMap> taxa) {
  if (!taxa) taxa = numbered_taxa(n);
  WeightedSplitSet splits = random_split_set(n, rng);
  std::vector<double> leaves(n);
  for (auto& l : leaves) l = uniform_length(rng);
  return WeightedTree(std::move(splits), std::move(leaves), std::move(taxa));
}

std::pair<WeightedTree, WeightedTree> parse_pair(const std::string& a, const std::string& b) {
  std::vector<treedist::RawTree> raw{treedist::parse_newick(a), treedist::parse_newick(b)};
  auto taxa = std::make_shared<const treedist::TaxaMap>(treedist::build_taxa_map(raw));
  return {treedist::splits_of_tree(raw[0], taxa), treedist::splits_of_tree(raw[1], taxa)};
}

const char* const kFig6First = "(((((1:1,2:1):0.83,3:1):0.6,4:1):0.88,5:1):0.47,6:1);";
const char* const kFig6Second = "(((1:1,6:1):0.47,(2:1,3:1):0.7):0.87,(4:1,5:1):0.15);";

std::pair<WeightedTree, WeightedTree> fig6_trees() { return parse_pair(kFig6First, kFig6Second); }

std::pair<WeightedSplitSet, WeightedSplitSet> exponential_family(std::size_t m,
                                                                 std::mt19937_64* rng) {
  const std::size_t n = 2 * m + 2;
  auto len = [&] { return rng ? uniform_length(*rng) : 1.0; };
  std::vector<treedist::WeightedSplit> first, second;
  for (std::size_t j = 2; j <= n - 1; ++j) {
    std::vector<std::size_t> leaves;
    for (std::size_t i = 1; i <= j; ++i) leaves.push_back(i);
    first.push_back({Split(n, leaves), len()});
  }
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<std::size_t> s;
    for (std::size_t i = 1; i <= 2 * k - 1; ++i) s.push_back(i);
    s.push_back(2 * k + 1);
    second.push_back({Split(n, s), len()});
    s.push_back(k < m ? 2 * k + 3 : n);
    second.push_back({Split(n, s), len()});
  }
  return {WeightedSplitSet(n, first), WeightedSplitSet(n, second)};
}

treedist::Ratio ratio(double a, double b) { return treedist::Ratio(a * a, b * b); }

treedist::RatioSequence random_sequence(std::size_t k, std::mt19937_64& rng, double max_len) {
  std::uniform_real_distribution<double> u(0.0, max_len);
  treedist::RatioSequence seq;
  seq.reserve(k);
  for (std::size_t i = 0; i < k; ++i) seq.push_back(ratio(max_len - u(rng), max_len - u(rng)));
  return seq;
}

std::vector<std::pair<double, double>> norms_of(const treedist::RatioSequence& seq) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : seq) out.emplace_back(std::sqrt(r.drop_norm_sq), std::sqrt(r.add_norm_sq));
  return out;
}

double exhaustive_partition_distance(const std::vector<std::pair<double, double>>& ab) {
  const std::size_t k = ab.size();
  if (k == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (k - 1)); ++cuts) {
    std::vector<std::pair<double, double>> blocks;  // squared sums
    double a2 = 0, b2 = 0;
    for (std::size_t i = 0; i < k; ++i) {
      a2 += ab[i].first * ab[i].first;
      b2 += ab[i].second * ab[i].second;
      if (i == k - 1 || (cuts >> i & 1)) {
        blocks.emplace_back(a2, b2);
        a2 = b2 = 0;
      }
    }
    bool ok = true;
    for (std::size_t j = 1; j < blocks.size() && ok; ++j)
      ok = std::sqrt(blocks[j - 1].first) / std::sqrt(blocks[j - 1].second) <=
           std::sqrt(blocks[j].first) / std::sqrt(blocks[j].second);
    if (!ok) continue;
    double sum = 0;
    for (auto [x, y] : blocks) sum += (std::sqrt(x) + std::sqrt(y)) * (std::sqrt(x) + std::sqrt(y));
    best = std::min(best, std::sqrt(sum));
  }
  return best;
}

bool compatible_oracle(const Split& e, const Split& f) {
  const std::size_t n = e.taxa_count();
  std::vector<bool> x(n + 1), y(n + 1);
  for (auto i : e.leaves()) x[i] = true;
  for (auto i : f.leaves()) y[i] = true;
  bool any[2][2] = {{false, false}, {false, false}};
  for (std::size_t i = 0; i <= n; ++i) any[x[i]][y[i]] = true;
  return !any[0][0] || !any[0][1] || !any[1][0] || !any[1][1];
}

bool fully_incompatible(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
  for (const auto& a : t1)
    if (t2.contains(a.split)) return false;
  auto crosses = [](const treedist::WeightedSplit& s, const WeightedSplitSet& other) {
    return std::any_of(other.begin(), other.end(),
                       [&](const auto& o) { return !compatible_oracle(s.split, o.split); });
  };
  return std::all_of(t1.begin(), t1.end(), [&](const auto& s) { return crosses(s, t2); }) &&
         std::all_of(t2.begin(), t2.end(), [&](const auto& s) { return crosses(s, t1); });
}

std::size_t chain_count_oracle(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
  const std::size_t m = t2.size();
  if (m > 20) throw std::invalid_argument("chain_count_oracle: too many splits");
  std::vector<std::uint32_t> cross(m, 0);
  for (std::size_t f = 0; f < m; ++f)
    for (std::size_t e = 0; e < t1.size(); ++e)
      if (!compatible_oracle(t1[e].split, t2[f].split)) cross[f] |= 1u << e;
  auto crossing = [&](std::uint32_t set) {
    std::uint32_t x = 0;
    for (std::size_t f = 0; f < m; ++f)
      if (set >> f & 1) x |= cross[f];
    return x;
  };
  std::vector<std::uint32_t> closed;
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    const std::uint32_t x = crossing(s);
    bool is_closed = true;
    for (std::size_t f = 0; f < m && is_closed; ++f)
      if (!(s >> f & 1) && (cross[f] & ~x) == 0) is_closed = false;
    if (is_closed) closed.push_back(s);
  }
  // count maximal chains from the bottom closed set by DP over covers
  std::sort(closed.begin(), closed.end(), [](auto a, auto b) {
    return __builtin_popcount(a) < __builtin_popcount(b) || (__builtin_popcount(a) == __builtin_popcount(b) && a < b);
  });
  std::map<std::uint32_t, std::size_t> ways;
  const std::uint32_t top = (1u << m) - 1;
  std::function<std::size_t(std::uint32_t)> count = [&](std::uint32_t s) -> std::size_t {
    if (s == top) return 1;
    if (auto it = ways.find(s); it != ways.end()) return it->second;
    std::size_t total = 0;
    for (auto t : closed) {
      if (t == s || (t & s) != s) continue;
      bool cover = true;
      for (auto u : closed)
        if (u != s && u != t && (u & s) == s && (u & t) == u) { cover = false; break; }
      if (cover) total += count(t);
    }
    return ways[s] = total;
  };
  return count(closed.front());
}

}  // namespace support
