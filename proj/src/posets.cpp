#include "treedist/posets.hpp"

#include <algorithm>
#include <unordered_map>

namespace treedist {

IncompatibilityPoset::IncompatibilityPoset(WeightedSplitSet first, WeightedSplitSet second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_.taxa_count() != second_.taxa_count())
    throw std::invalid_argument("split sets over different taxa counts");
  if (!common_splits(first_, second_).empty())
    throw CommonSplitsError("incompatibility poset needs split sets without common splits");
  crossing_.assign(second_.size(), Bitset(first_.size()));
  for (std::size_t f = 0; f < second_.size(); ++f)
    for (std::size_t e = 0; e < first_.size(); ++e)
      if (!are_compatible(first_[e].split, second_[f].split)) crossing_[f].set(e);

  std::unordered_map<Bitset, std::size_t, BitsetHash> by_crossing;
  class_of_.resize(second_.size());
  for (std::size_t f = 0; f < second_.size(); ++f) {
    auto [it, inserted] = by_crossing.try_emplace(crossing_[f], classes_.size());
    if (inserted) classes_.push_back({Bitset(second_.size()), crossing_[f]});
    classes_[it->second].members.set(f);
    class_of_[f] = it->second;
  }
}

Bitset IncompatibilityPoset::crossing_of(const Bitset& second_set) const {
  Bitset out(first_.size());
  second_set.for_each([&](std::size_t f) { out |= crossing_[f]; });
  return out;
}

bool IncompatibilityPoset::less_equal(std::size_t i, std::size_t j) const {
  return classes_[i].crossing.is_subset_of(classes_[j].crossing);
}

std::vector<std::size_t> IncompatibilityPoset::minimal_classes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < classes_.size() && minimal; ++j)
      if (j != i && less_equal(j, i)) minimal = false;
    if (minimal) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> IncompatibilityPoset::hasse_edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t c = classes_.size();
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      if (i == j || !less_equal(i, j)) continue;
      bool cover = true;
      for (std::size_t k = 0; k < c && cover; ++k)
        if (k != i && k != j && less_equal(i, k) && less_equal(k, j)) cover = false;
      if (cover) out.emplace_back(i, j);
    }
  return out;
}

bool IncompatibilityPoset::fully_incompatible() const {
  Bitset hit(first_.size());
  for (const auto& x : crossing_) {
    if (x.none()) return false;
    hit |= x;
  }
  return hit == all_first();
}

Bitset IncompatibilityPoset::all_first() const {
  Bitset b(first_.size());
  for (std::size_t i = 0; i < first_.size(); ++i) b.set(i);
  return b;
}

Bitset IncompatibilityPoset::all_second() const {
  Bitset b(second_.size());
  for (std::size_t i = 0; i < second_.size(); ++i) b.set(i);
  return b;
}

std::vector<Split> IncompatibilityPoset::first_splits(const Bitset& set) const {
  std::vector<Split> out;
  set.for_each([&](std::size_t i) { out.push_back(first_[i].split); });
  return out;
}

std::vector<Split> IncompatibilityPoset::second_splits(const Bitset& set) const {
  std::vector<Split> out;
  set.for_each([&](std::size_t i) { out.push_back(second_[i].split); });
  return out;
}

Bitset IncompatibilityPoset::second_indices(const std::vector<Split>& splits) const {
  Bitset out(second_.size());
  for (const auto& s : splits) {
    auto it = std::find_if(second_.begin(), second_.end(),
                           [&](const WeightedSplit& w) { return w.split == s; });
    if (it == second_.end()) throw std::invalid_argument("split " + s.to_string() + " not in second tree");
    out.set(static_cast<std::size_t>(it - second_.begin()));
  }
  return out;
}

Ratio IncompatibilityPoset::transition(const Bitset& dropped, const Bitset& added) const {
  Ratio r;
  dropped.for_each([&](std::size_t e) {
    r.drop_norm_sq += first_[e].length * first_[e].length;
    r.dropped.push_back(first_[e].split);
  });
  added.for_each([&](std::size_t f) {
    r.add_norm_sq += second_[f].length * second_[f].length;
    r.added.push_back(second_[f].split);
  });
  // entries are stored sorted, so index order is split order
  return r;
}

IncompatibilityPoset incompatibility_poset(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
  return IncompatibilityPoset(t1, t2);
}

IncompatibilityPoset incompatibility_poset(const WeightedTree& t1, const WeightedTree& t2) {
  if (!(t1.taxa() == t2.taxa())) throw TaxaMismatchError("trees have different taxa");
  return IncompatibilityPoset(t1.splits(), t2.splits());
}

Bitset closure(const Bitset& added, const IncompatibilityPoset& poset) {
  const Bitset x = poset.crossing_of(added);
  Bitset out(poset.second_size());
  for (std::size_t f = 0; f < poset.second_size(); ++f)
    if (poset.crossing(f).is_subset_of(x)) out.set(f);
  return out;
}

std::vector<Split> closure(const std::vector<Split>& added, const IncompatibilityPoset& poset) {
  return poset.second_splits(closure(poset.second_indices(added), poset));
}

PathPosetNode make_node(const Bitset& closed_added, const IncompatibilityPoset& poset) {
  return PathPosetNode{closed_added, poset.crossing_of(closed_added)};
}

PathPosetNode bottom_node(const IncompatibilityPoset& poset) {
  return make_node(closure(poset.empty_second(), poset), poset);
}

PathPosetNode top_node(const IncompatibilityPoset& poset) {
  return make_node(poset.all_second(), poset);
}

std::vector<ResidualClass> minimal_classes(const IncompatibilityPoset& poset,
                                           const Bitset& first_residual,
                                           const Bitset& second_residual) {
  std::vector<ResidualClass> groups;
  std::unordered_map<Bitset, std::size_t, BitsetHash> index;
  second_residual.for_each([&](std::size_t f) {
    Bitset rc = poset.crossing(f) & first_residual;
    auto [it, inserted] = index.try_emplace(rc, groups.size());
    if (inserted) groups.push_back({Bitset(poset.second_size()), rc});
    groups[it->second].members.set(f);
  });
  std::vector<ResidualClass> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < groups.size() && minimal; ++j)
      if (j != i && groups[j].residual_crossing.is_subset_of(groups[i].residual_crossing))
        minimal = false;
    if (minimal) out.push_back(groups[i]);
  }
  // deterministic order: by lowest member index
  std::sort(out.begin(), out.end(), [](const ResidualClass& a, const ResidualClass& b) {
    return a.members.indices().front() < b.members.indices().front();
  });
  return out;
}

std::vector<std::vector<Split>> minimal_classes(const WeightedSplitSet& first_residual,
                                                const WeightedSplitSet& second_residual) {
  IncompatibilityPoset poset(first_residual, second_residual);
  std::vector<std::vector<Split>> out;
  for (const auto& c : minimal_classes(poset, poset.all_first(), poset.all_second()))
    out.push_back(poset.second_splits(c.members));
  return out;
}

std::vector<Cover> covers_above(const PathPosetNode& node, const IncompatibilityPoset& poset) {
  const Bitset first_residual = poset.all_first() - node.crossing;
  const Bitset second_residual = poset.all_second() - node.added;
  std::vector<Cover> out;
  for (const auto& g : minimal_classes(poset, first_residual, second_residual)) {
    PathPosetNode succ = make_node(closure(node.added | g.members, poset), poset);
    Bitset dropped = succ.crossing - node.crossing;
    Bitset added = succ.added - node.added;
    out.push_back({std::move(succ), std::move(dropped), std::move(added)});
  }
  return out;
}

MaximalChainIterator::MaximalChainIterator(const IncompatibilityPoset& poset) : poset_(&poset) {
  stack_.push_back(Frame{covers_above(bottom_node(poset), poset), 0});
}

std::optional<Chain> MaximalChainIterator::next() {
  while (!stack_.empty()) {
    Frame& frame = stack_.back();
    if (frame.covers.empty()) {
      Chain out = steps_;
      stack_.pop_back();
      if (!steps_.empty()) steps_.pop_back();
      return out;
    }
    if (frame.next < frame.covers.size()) {
      const Cover& c = frame.covers[frame.next++];
      steps_.push_back({c.dropped, c.added});
      auto covers = covers_above(c.node, *poset_);
      stack_.push_back(Frame{std::move(covers), 0});
    } else {
      stack_.pop_back();
      if (!steps_.empty()) steps_.pop_back();
    }
  }
  return std::nullopt;
}

RatioSequence chain_ratios(const Chain& chain, const IncompatibilityPoset& poset) {
  RatioSequence seq;
  seq.reserve(chain.size());
  for (const auto& step : chain) seq.push_back(poset.transition(step.dropped, step.added));
  return seq;
}

}  // namespace treedist
