#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treedist/posets.hpp"
#include "treedist/ratio_geo.hpp"
#include "treedist/splits.hpp"

namespace treedist {

enum class Algorithm { dynamic, divide, brute };

std::string to_string(Algorithm a);
// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(const std::string& name);

struct GeoOptions {
  Algorithm algorithm = Algorithm::divide;
  bool include_leaves = false;
  // Maximal chains brute force may enumerate per subproblem.
  std::size_t chain_cap = 1'000'000;
  // Cooperative cancellation; exceeded deadlines raise GeodesicTimeout.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class ChainCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeodesicTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonSplitTerm {
  Split split;
  double length_first = 0.0;
  double length_second = 0.0;
};

struct Geodesic {
  double distance = 0.0;
  // Ascending orthant transitions, merged over all independent subproblems.
  RatioSequence carrier;
  Algorithm algorithm = Algorithm::divide;
  // Splits shared by both trees (after inserting zero-length copies of splits
  // compatible with the whole other tree).
  std::vector<CommonSplitTerm> common;
  // Σ (leaf length difference)², zero unless leaves are included.
  double leaf_term = 0.0;
  // One entry per subproblem without common splits.
  std::vector<Geodesic> components;
};

// Geodesic between two trees with no common splits in which every split is
// incompatible with some split of the other tree. All three throw
// CommonSplitsError or std::invalid_argument when that does not hold.
Geodesic geodemaps_dynamic(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                           const GeoOptions& opts = {});
Geodesic geodemaps_divide(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                          const GeoOptions& opts = {});
Geodesic brute_force(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                     const GeoOptions& opts = {});

// Best distance and carrier stored at each path poset node visited by the
// dynamic search.
struct DynamicNodeRecord {
  std::vector<Split> added;
  double distance = 0.0;
  RatioSequence carrier;
};
Geodesic geodemaps_dynamic(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                           const GeoOptions& opts, std::vector<DynamicNodeRecord>* trace);

// Σᵢ (|lᵢ|₁ - |lᵢ|₂)².
double leaf_contribution(const WeightedTree& t1, const WeightedTree& t2);

// Full pipeline for arbitrary split sets: common-split decomposition, then
// the selected core algorithm per independent subproblem.
Geodesic geodesic_between(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                          const GeoOptions& opts = {});

// Throws TaxaMismatchError when the trees have different taxa.
Geodesic geodesic_distance(const WeightedTree& t1, const WeightedTree& t2,
                           const GeoOptions& opts = {});

}  // namespace treedist
