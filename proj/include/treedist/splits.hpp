#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treedist/bitset.hpp"
#include "treedist/newick.hpp"

namespace treedist {

// A bipartition of {0, ..., n}. Stored as the block that does not contain the
// root 0; both blocks have at least two elements.
class Split {
 public:
  Split() = default;
  // Throws std::invalid_argument unless 2 <= |leaves| <= n-1 and all leaves are in 1..n.
  Split(std::size_t n, const std::vector<std::size_t>& leaves);
  // Takes a block over bits 0..n; bit 0 must be clear.
  explicit Split(Bitset block);

  std::size_t taxa_count() const { return block_.size() - 1; }
  const Bitset& block() const { return block_; }
  bool contains(std::size_t leaf) const { return block_.test(leaf); }
  std::vector<std::size_t> leaves() const { return block_.indices(); }

  // "23|0145" style when n < 10, otherwise comma separated.
  std::string to_string() const;

  friend auto operator<=>(const Split&, const Split&) = default;
  friend bool operator==(const Split&, const Split&) = default;

 private:
  Bitset block_;
};

struct SplitHash {
  std::size_t operator()(const Split& s) const { return s.block().hash(); }
};

// Four-intersection test. With root-free blocks X and Y it reduces to
// X∩Y = ∅, X ⊆ Y or Y ⊆ X.
bool are_compatible(const Split& e, const Split& f);

struct WeightedSplit {
  Split split;
  double length = 0.0;

  friend bool operator==(const WeightedSplit&, const WeightedSplit&) = default;
};

// Map from split to length, kept sorted by split.
class WeightedSplitSet {
 public:
  WeightedSplitSet() = default;
  explicit WeightedSplitSet(std::size_t n) : n_(n) {}
  // Throws on duplicates or negative lengths.
  WeightedSplitSet(std::size_t n, std::vector<WeightedSplit> entries);

  std::size_t taxa_count() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<WeightedSplit>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const WeightedSplit& operator[](std::size_t i) const { return entries_[i]; }

  bool contains(const Split& s) const;
  std::optional<double> length(const Split& s) const;
  std::vector<Split> splits() const;

  // Replaces the length if present.
  void insert(const Split& s, double length);
  bool erase(const Split& s);

  double norm() const;
  bool pairwise_compatible() const;

  friend bool operator==(const WeightedSplitSet&, const WeightedSplitSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<WeightedSplit> entries_;
};

// √(Σ |e|²) over a set of lengths.
double norm(const WeightedSplitSet& set);

class WeightedTree {
 public:
  WeightedTree() = default;
  WeightedTree(WeightedSplitSet splits, std::vector<double> leaf_lengths,
               std::shared_ptr<const TaxaMap> taxa);

  std::size_t taxa_count() const { return splits_.taxa_count(); }
  const WeightedSplitSet& splits() const { return splits_; }
  const std::vector<double>& leaf_lengths() const { return leaf_lengths_; }
  // Length of the pendant edge of leaf i, 1-based.
  double leaf_length(std::size_t leaf) const { return leaf_lengths_.at(leaf - 1); }
  const TaxaMap& taxa() const { return *taxa_; }
  const std::shared_ptr<const TaxaMap>& taxa_ptr() const { return taxa_; }

  friend bool operator==(const WeightedTree& a, const WeightedTree& b) {
    return a.splits_ == b.splits_ && a.leaf_lengths_ == b.leaf_lengths_ &&
           *a.taxa_ == *b.taxa_;
  }

 private:
  WeightedSplitSet splits_;
  std::vector<double> leaf_lengths_;
  std::shared_ptr<const TaxaMap> taxa_;
};

// One split per internal edge of positive length (leaves below the edge form
// the block); pendant edges become leaf lengths; unary nodes are merged.
WeightedTree splits_of_tree(const RawTree& raw, std::shared_ptr<const TaxaMap> taxa);

// Splits of `against` incompatible with at least one split of `of`.
std::vector<Split> crossing_set(const std::vector<Split>& of, const std::vector<Split>& against);
// Splits of `against` compatible with every split of `of`.
std::vector<Split> compatibility_set(const std::vector<Split>& of,
                                     const std::vector<Split>& against);

std::vector<Split> common_splits(const WeightedSplitSet& t1, const WeightedSplitSet& t2);
std::vector<Split> common_splits(const WeightedTree& t1, const WeightedTree& t2);

struct SplitSetPair {
  WeightedSplitSet first;
  WeightedSplitSet second;
};

struct Decomposition {
  SplitSetPair above;  // e and everything below it contracted
  SplitSetPair below;  // e and everything not below it contracted
  double length_first = 0.0;
  double length_second = 0.0;
};

// Splits the pair at a common split e. Throws std::invalid_argument when e is
// not in both sets.
Decomposition decompose_at(const WeightedSplitSet& t1, const WeightedSplitSet& t2, const Split& e);
Decomposition decompose_at(const WeightedTree& t1, const WeightedTree& t2, const Split& e);

}  // namespace treedist
