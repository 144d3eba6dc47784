#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "treedist/bitset.hpp"
#include "treedist/ratio_geo.hpp"
#include "treedist/splits.hpp"

namespace treedist {

class CommonSplitsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Splits of the second tree grouped by their crossing sets in the first tree,
// ordered by inclusion of those crossing sets. Split sets are addressed by
// index: bit i of a "first" set is first()[i], likewise for "second".
class IncompatibilityPoset {
 public:
  struct EquivalenceClass {
    Bitset members;   // over second-tree indices
    Bitset crossing;  // over first-tree indices
  };

  // Throws CommonSplitsError when the sets share a split.
  IncompatibilityPoset(WeightedSplitSet first, WeightedSplitSet second);

  const WeightedSplitSet& first() const { return first_; }
  const WeightedSplitSet& second() const { return second_; }
  std::size_t first_size() const { return first_.size(); }
  std::size_t second_size() const { return second_.size(); }

  // X(f) for the i-th split of the second tree.
  const Bitset& crossing(std::size_t second_index) const { return crossing_[second_index]; }
  // X(A) = union of member crossing sets.
  Bitset crossing_of(const Bitset& second_set) const;

  const std::vector<EquivalenceClass>& classes() const { return classes_; }
  std::size_t class_of(std::size_t second_index) const { return class_of_[second_index]; }
  // Class i <= class j iff crossing(i) ⊆ crossing(j).
  bool less_equal(std::size_t i, std::size_t j) const;
  std::vector<std::size_t> minimal_classes() const;
  // Cover relations (i below j) of the class order.
  std::vector<std::pair<std::size_t, std::size_t>> hasse_edges() const;

  // True when no split on either side is compatible with the whole other
  // tree; then the path poset runs from ∅ to the full second set.
  bool fully_incompatible() const;

  Bitset empty_first() const { return Bitset(first_.size()); }
  Bitset empty_second() const { return Bitset(second_.size()); }
  Bitset all_first() const;
  Bitset all_second() const;

  std::vector<Split> first_splits(const Bitset& set) const;
  std::vector<Split> second_splits(const Bitset& set) const;
  Bitset second_indices(const std::vector<Split>& splits) const;

  // Transition dropping `dropped` (first-tree lengths) and adding `added`
  // (second-tree lengths).
  Ratio transition(const Bitset& dropped, const Bitset& added) const;

 private:
  WeightedSplitSet first_;
  WeightedSplitSet second_;
  std::vector<Bitset> crossing_;
  std::vector<EquivalenceClass> classes_;
  std::vector<std::size_t> class_of_;
};

IncompatibilityPoset incompatibility_poset(const WeightedSplitSet& t1, const WeightedSplitSet& t2);
IncompatibilityPoset incompatibility_poset(const WeightedTree& t1, const WeightedTree& t2);

// {f : X(f) ⊆ X(A)}.
Bitset closure(const Bitset& added, const IncompatibilityPoset& poset);
std::vector<Split> closure(const std::vector<Split>& added, const IncompatibilityPoset& poset);

// A closed set of second-tree splits with its crossing set.
struct PathPosetNode {
  Bitset added;
  Bitset crossing;

  friend bool operator==(const PathPosetNode&, const PathPosetNode&) = default;
};

PathPosetNode make_node(const Bitset& closed_added, const IncompatibilityPoset& poset);
PathPosetNode bottom_node(const IncompatibilityPoset& poset);
PathPosetNode top_node(const IncompatibilityPoset& poset);

// Classes of the residual poset (crossing sets restricted to
// `first_residual`, members drawn from `second_residual`) with no strictly
// smaller residual crossing set.
struct ResidualClass {
  Bitset members;
  Bitset residual_crossing;
};
std::vector<ResidualClass> minimal_classes(const IncompatibilityPoset& poset,
                                           const Bitset& first_residual,
                                           const Bitset& second_residual);
// Split-level form over two explicit residual sets.
std::vector<std::vector<Split>> minimal_classes(const WeightedSplitSet& first_residual,
                                                const WeightedSplitSet& second_residual);

struct Cover {
  PathPosetNode node;
  Bitset dropped;  // first-tree indices
  Bitset added;    // second-tree indices
};

// One successor per minimal class of the residual poset above `node`.
std::vector<Cover> covers_above(const PathPosetNode& node, const IncompatibilityPoset& poset);

struct ChainStep {
  Bitset dropped;
  Bitset added;
};
using Chain = std::vector<ChainStep>;

// Depth-first enumeration of the maximal chains bottom → top. The number of
// chains can be exponential in the number of leaves; nothing is materialised
// beyond the current path.
class MaximalChainIterator {
 public:
  explicit MaximalChainIterator(const IncompatibilityPoset& poset);
  std::optional<Chain> next();

 private:
  struct Frame {
    std::vector<Cover> covers;
    std::size_t next = 0;
  };
  const IncompatibilityPoset* poset_;
  std::vector<Frame> stack_;
  Chain steps_;
};

RatioSequence chain_ratios(const Chain& chain, const IncompatibilityPoset& poset);

}  // namespace treedist
