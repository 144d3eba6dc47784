#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "treedist/splits.hpp"

namespace treedist {

// One orthant transition: the splits dropped (with their lengths in the
// first tree) and added (lengths in the second tree). Norms are kept squared;
// split lists are kept sorted.
struct Ratio {
  double drop_norm_sq = 0.0;
  double add_norm_sq = 0.0;
  std::vector<Split> dropped;
  std::vector<Split> added;

  Ratio() = default;
  Ratio(double drop_sq, double add_sq) : drop_norm_sq(drop_sq), add_norm_sq(add_sq) {}
  Ratio(double drop_sq, double add_sq, std::vector<Split> drop, std::vector<Split> add);

  // Builds a transition from explicit split sets and the trees holding their lengths.
  static Ratio from_sets(const std::vector<Split>& dropped, const WeightedSplitSet& first,
                         const std::vector<Split>& added, const WeightedSplitSet& second);

  double drop_norm() const;
  double add_norm() const;
  // a/b, +inf when b == 0.
  double value() const;
  bool degenerate() const { return drop_norm_sq == 0.0 && add_norm_sq == 0.0; }
};

// -1, 0, +1 for a/b <, ==, > c/d, by cross-multiplying squares.
int compare_ratios(const Ratio& x, const Ratio& y);

using RatioSequence = std::vector<Ratio>;

class OverlappingSplitsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sums the squared norms and unions the split sets. Throws
// OverlappingSplitsError when the sets intersect.
Ratio combine(const Ratio& r1, const Ratio& r2);

struct PathSpaceGeoStats {
  std::size_t comparisons = 0;
  std::size_t combines = 0;
};

// Combine-while-non-ascending stack pass. Drops 0/0 entries first; the
// result is strictly ascending and unique for the input.
RatioSequence path_space_geo(const RatioSequence& seq, PathSpaceGeoStats* stats = nullptr);

// Non-strict ascending check.
bool is_ascending(const RatioSequence& seq);

// √Σ(aᵢ + bᵢ)²; throws std::invalid_argument if the sequence is not ascending.
double distance_of(const RatioSequence& ascending);
// Same quantity squared, without the ascending check.
double squared_length(const RatioSequence& seq);

// Ascending merge of independent carriers; exact ties are combined.
RatioSequence merge_ascending(const std::vector<RatioSequence>& seqs);

// Lexicographic order on block structure (dropped, then added split lists,
// block by block). Used only to break exact distance ties.
std::strong_ordering compare_block_structure(const RatioSequence& a, const RatioSequence& b);

std::string describe(const Ratio& r);

}  // namespace treedist
