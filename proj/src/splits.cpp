#include "treedist/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace treedist {

Split::Split(std::size_t n, const std::vector<std::size_t>& leaves) : block_(n + 1) {
  for (auto l : leaves) {
    if (l == 0 || l > n) throw std::invalid_argument("split leaf out of range");
    block_.set(l);
  }
  auto size = block_.count();
  if (size < 2 || size + 1 > n) throw std::invalid_argument("split is trivial");
}

Split::Split(Bitset block) : block_(std::move(block)) {
  if (block_.size() == 0 || block_.test(0)) throw std::invalid_argument("split block holds the root");
  auto size = block_.count();
  if (size < 2 || size + 1 > taxa_count()) throw std::invalid_argument("split is trivial");
}

std::string Split::to_string() const {
  const std::size_t n = taxa_count();
  std::ostringstream left, right;
  const bool compact = n < 10;
  bool first_l = true, first_r = true;
  for (std::size_t i = 0; i <= n; ++i) {
    auto& os = block_.test(i) ? left : right;
    bool& first = block_.test(i) ? first_l : first_r;
    if (!compact && !first) os << ',';
    os << i;
    first = false;
  }
  return left.str() + "|" + right.str();
}

bool are_compatible(const Split& e, const Split& f) {
  if (e.block().size() != f.block().size())
    throw std::invalid_argument("splits over different taxa counts");
  const auto& x = e.block();
  const auto& y = f.block();
  return !x.intersects(y) || x.is_subset_of(y) || y.is_subset_of(x);
}

WeightedSplitSet::WeightedSplitSet(std::size_t n, std::vector<WeightedSplit> entries)
    : n_(n), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.split.taxa_count() != n_) throw std::invalid_argument("split over wrong taxa count");
    if (!(e.length >= 0.0)) throw std::invalid_argument("negative split length");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const WeightedSplit& a, const WeightedSplit& b) { return a.split < b.split; });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const auto& a, const auto& b) { return a.split == b.split; });
  if (dup != entries_.end()) throw std::invalid_argument("duplicate split");
}

namespace {
auto split_less = [](const WeightedSplit& a, const Split& s) { return a.split < s; };
}

bool WeightedSplitSet::contains(const Split& s) const { return length(s).has_value(); }

std::optional<double> WeightedSplitSet::length(const Split& s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s, split_less);
  if (it == entries_.end() || it->split != s) return std::nullopt;
  return it->length;
}

std::vector<Split> WeightedSplitSet::splits() const {
  std::vector<Split> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.split);
  return out;
}

void WeightedSplitSet::insert(const Split& s, double length) {
  if (s.taxa_count() != n_) throw std::invalid_argument("split over wrong taxa count");
  if (!(length >= 0.0)) throw std::invalid_argument("negative split length");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s, split_less);
  if (it != entries_.end() && it->split == s)
    it->length = length;
  else
    entries_.insert(it, WeightedSplit{s, length});
}

bool WeightedSplitSet::erase(const Split& s) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s, split_less);
  if (it == entries_.end() || it->split != s) return false;
  entries_.erase(it);
  return true;
}

double WeightedSplitSet::norm() const {
  double sq = 0.0;
  for (const auto& e : entries_) sq += e.length * e.length;
  return std::sqrt(sq);
}

bool WeightedSplitSet::pairwise_compatible() const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      if (!are_compatible(entries_[i].split, entries_[j].split)) return false;
  return true;
}

double norm(const WeightedSplitSet& set) { return set.norm(); }

WeightedTree::WeightedTree(WeightedSplitSet splits, std::vector<double> leaf_lengths,
                           std::shared_ptr<const TaxaMap> taxa)
    : splits_(std::move(splits)), leaf_lengths_(std::move(leaf_lengths)), taxa_(std::move(taxa)) {
  if (!taxa_) throw std::invalid_argument("tree without taxa");
  const std::size_t n = taxa_->size();
  if (splits_.taxa_count() != n || leaf_lengths_.size() != n)
    throw std::invalid_argument("tree dimensions do not match its taxa");
  if (n >= 2 && splits_.size() > n - 2) throw std::invalid_argument("too many splits for a tree");
  if (!splits_.pairwise_compatible()) throw std::invalid_argument("tree splits are incompatible");
}

WeightedTree splits_of_tree(const RawTree& raw, std::shared_ptr<const TaxaMap> taxa) {
  const std::size_t n = taxa->size();
  if (raw.leaf_count() != n) throw TaxaMismatchError("tree leaf count differs from taxa map");
  // Leaves below each node, then accumulate edge lengths per cluster so that
  // unary chains merge into one edge.
  std::vector<Bitset> below(raw.nodes.size(), Bitset(n + 1));
  std::vector<int> order;  // post-order
  std::vector<std::pair<int, std::size_t>> stack{{raw.root, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto& kids = raw.nodes[node].children;
    if (next < kids.size()) {
      int child = kids[next++];
      stack.push_back({child, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  std::map<Bitset, double> cluster_length;
  for (int id : order) {
    const auto& node = raw.nodes[id];
    if (node.is_leaf()) {
      if (!taxa->contains(node.label))
        throw TaxaMismatchError("leaf '" + node.label + "' missing from taxa map");
      below[id].set(taxa->index(node.label));
    } else {
      for (int c : node.children) below[id] |= below[c];
    }
    if (id != raw.root) cluster_length[below[id]] += node.length;
  }
  std::vector<double> leaf_lengths(n, 0.0);
  std::vector<WeightedSplit> entries;
  for (const auto& [block, length] : cluster_length) {
    auto size = block.count();
    if (size == 1) {
      leaf_lengths[block.indices().front() - 1] = length;
    } else if (size < n && length > 0.0) {
      entries.push_back({Split(block), length});
    }
    // size == n: a unary root edge, i.e. part of the root's pendant edge.
  }
  return WeightedTree(WeightedSplitSet(n, std::move(entries)), std::move(leaf_lengths),
                      std::move(taxa));
}

std::vector<Split> crossing_set(const std::vector<Split>& of, const std::vector<Split>& against) {
  std::vector<Split> out;
  for (const auto& b : against)
    if (std::any_of(of.begin(), of.end(), [&](const Split& a) { return !are_compatible(a, b); }))
      out.push_back(b);
  return out;
}

std::vector<Split> compatibility_set(const std::vector<Split>& of,
                                     const std::vector<Split>& against) {
  std::vector<Split> out;
  for (const auto& b : against)
    if (std::all_of(of.begin(), of.end(), [&](const Split& a) { return are_compatible(a, b); }))
      out.push_back(b);
  return out;
}

std::vector<Split> common_splits(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
  std::vector<Split> out;
  for (const auto& e : t1)
    if (t2.contains(e.split)) out.push_back(e.split);
  return out;
}

std::vector<Split> common_splits(const WeightedTree& t1, const WeightedTree& t2) {
  if (!(t1.taxa() == t2.taxa())) throw TaxaMismatchError("trees have different taxa");
  return common_splits(t1.splits(), t2.splits());
}

Decomposition decompose_at(const WeightedSplitSet& t1, const WeightedSplitSet& t2, const Split& e) {
  auto l1 = t1.length(e);
  auto l2 = t2.length(e);
  if (!l1 || !l2) throw std::invalid_argument("decomposition split " + e.to_string() + " is not common");
  const std::size_t n = t1.taxa_count();
  Decomposition d{{WeightedSplitSet(n), WeightedSplitSet(n)},
                  {WeightedSplitSet(n), WeightedSplitSet(n)},
                  *l1,
                  *l2};
  auto route = [&](const WeightedSplitSet& src, WeightedSplitSet& above, WeightedSplitSet& below) {
    for (const auto& ws : src) {
      if (ws.split == e) continue;
      if (ws.split.block().is_subset_of(e.block()))
        below.insert(ws.split, ws.length);
      else
        above.insert(ws.split, ws.length);
    }
  };
  route(t1, d.above.first, d.below.first);
  route(t2, d.above.second, d.below.second);
  return d;
}

Decomposition decompose_at(const WeightedTree& t1, const WeightedTree& t2, const Split& e) {
  if (!(t1.taxa() == t2.taxa())) throw TaxaMismatchError("trees have different taxa");
  return decompose_at(t1.splits(), t2.splits(), e);
}

}  // namespace treedist
