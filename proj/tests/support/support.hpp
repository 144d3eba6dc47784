#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "treedist/newick.hpp"
#include "treedist/ratio_geo.hpp"
#include "treedist/splits.hpp"

namespace support {

using treedist::WeightedSplitSet;
using treedist::WeightedTree;

// Taxa named t01, t02, ... so lexicographic order equals numeric order.
std::shared_ptr<const treedist::TaxaMap> numbered_taxa(std::size_t n);

// Uniform rooted binary topology by stepwise insertion of leaves on a uniformly
// chosen edge (root edge included); internal and leaf lengths uniform in (0,1].
WeightedTree random_tree(std::size_t n, std::mt19937_64& rng,
                         std::shared_ptr<const treedist::TaxaMap> taxa = nullptr);

// Random compatible split set of a binary tree (no leaf data).
WeightedSplitSet random_split_set(std::size_t n, std::mt19937_64& rng);

double uniform_length(std::mt19937_64& rng);  // (0,1]

// Parses two Newick lines against one taxa map.
std::pair<WeightedTree, WeightedTree> parse_pair(const std::string& a, const std::string& b);

// Running example on 6 leaves: four splits each, no common split, three maximal
// chains, and Hasse-edge ratios 0.83/0.7, 0.88/0.15, 0.47/0.87.
extern const char* const kFig6First;
extern const char* const kFig6Second;
std::pair<WeightedTree, WeightedTree> fig6_trees();

// Pair on n = 2m+2 leaves whose incompatibility poset has m minimal classes
// and whose path poset contains every subset of them (2^m closed sets at least).
std::pair<WeightedSplitSet, WeightedSplitSet> exponential_family(std::size_t m,
                                                                 std::mt19937_64* rng = nullptr);

// Ratio with plain norms (not squares).
treedist::Ratio ratio(double a, double b);
treedist::RatioSequence random_sequence(std::size_t k, std::mt19937_64& rng, double max_len = 10.0);

// Minimum of sqrt(Σ(Ã+B̃)²) over all consecutive partitions of (a_i, b_i)
// whose block ratios are non-descending. Plain doubles, no library code.
double exhaustive_partition_distance(const std::vector<std::pair<double, double>>& ab);
std::vector<std::pair<double, double>> norms_of(const treedist::RatioSequence& seq);

// Four-intersection compatibility on explicit blocks with the root reattached.
bool compatible_oracle(const treedist::Split& e, const treedist::Split& f);

// Number of maximal chains in the lattice of closed subsets of E_T2, from an
// independent enumeration of all subsets (|E_T2| ≤ ~16).
std::size_t chain_count_oracle(const WeightedSplitSet& t1, const WeightedSplitSet& t2);

// No common split, and every split crosses some split of the other side.
bool fully_incompatible(const WeightedSplitSet& t1, const WeightedSplitSet& t2);

}  // namespace support
