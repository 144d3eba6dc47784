#include "treedist/geodesic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_map>

namespace treedist {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dynamic: return "dynamic";
    case Algorithm::divide: return "divide";
    case Algorithm::brute: return "brute";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "dynamic") return Algorithm::dynamic;
  if (name == "divide") return Algorithm::divide;
  if (name == "brute") return Algorithm::brute;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

namespace {

void check_deadline(const GeoOptions& opts) {
  if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
    throw GeodesicTimeout("geodesic computation exceeded its deadline");
}

// Candidate a beats incumbent b: shorter, or equally long with the smaller
// block structure.
bool better(double dsq_a, const RatioSequence& a, double dsq_b, const RatioSequence& b) {
  if (dsq_a != dsq_b) return dsq_a < dsq_b;
  return compare_block_structure(a, b) < 0;
}

IncompatibilityPoset checked_poset(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
  IncompatibilityPoset poset(t1, t2);
  if (!poset.fully_incompatible())
    throw std::invalid_argument(
        "split compatible with the whole other tree; decompose the pair first");
  return poset;
}

Geodesic atom_result(RatioSequence carrier, Algorithm algorithm) {
  Geodesic g;
  g.distance = std::sqrt(squared_length(carrier));
  g.carrier = std::move(carrier);
  g.algorithm = algorithm;
  return g;
}

RatioSequence extend(const RatioSequence& ascending, const Ratio& next) {
  RatioSequence seq = ascending;
  seq.push_back(next);
  return path_space_geo(seq);
}

struct PairKey {
  WeightedSplitSet first;
  WeightedSplitSet second;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  static std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
  std::size_t operator()(const PairKey& k) const {
    std::size_t h = k.first.taxa_count();
    for (const auto* set : {&k.first, &k.second}) {
      h = mix(h, set->size());
      for (const auto& w : *set) {
        h = mix(h, w.split.block().hash());
        h = mix(h, std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(w.length)));
      }
    }
    return h;
  }
};

class Solver {
 public:
  explicit Solver(const GeoOptions& opts) : opts_(opts) {}

  // Common-split decomposition followed by the core algorithm on each piece.
  Geodesic solve(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
    if (t1.taxa_count() != t2.taxa_count())
      throw std::invalid_argument("split sets over different taxa counts");
    Geodesic out;
    out.algorithm = opts_.algorithm;

    // Splits compatible with the whole other tree become zero-length common splits.
    WeightedSplitSet a = t1, b = t2;
    RatioSequence one_sided;
    for (const auto& f : t2) {
      if (t1.contains(f.split)) continue;
      bool free = std::all_of(t1.begin(), t1.end(),
                              [&](const WeightedSplit& e) { return are_compatible(e.split, f.split); });
      if (free) {
        a.insert(f.split, 0.0);
        if (f.length > 0.0) one_sided.emplace_back(0.0, f.length * f.length, std::vector<Split>{},
                                                   std::vector<Split>{f.split});
      }
    }
    for (const auto& e : t1) {
      if (t2.contains(e.split)) continue;
      bool free = std::all_of(t2.begin(), t2.end(),
                              [&](const WeightedSplit& f) { return are_compatible(e.split, f.split); });
      if (free) {
        b.insert(e.split, 0.0);
        if (e.length > 0.0) one_sided.emplace_back(e.length * e.length, 0.0,
                                                   std::vector<Split>{e.split}, std::vector<Split>{});
      }
    }

    std::vector<SplitSetPair> pieces{{std::move(a), std::move(b)}};
    for (const auto& c : common_splits(pieces.front().first, pieces.front().second)) {
      auto it = std::find_if(pieces.begin(), pieces.end(), [&](const SplitSetPair& p) {
        return p.first.contains(c) && p.second.contains(c);
      });
      Decomposition d = decompose_at(it->first, it->second, c);
      out.common.push_back({c, d.length_first, d.length_second});
      *it = std::move(d.above);
      pieces.push_back(std::move(d.below));
    }

    std::vector<RatioSequence> carriers;
    // one-sided transitions: 0/b sort first, a/0 last
    std::sort(one_sided.begin(), one_sided.end(),
              [](const Ratio& x, const Ratio& y) { return compare_ratios(x, y) < 0; });
    carriers.push_back(path_space_geo(one_sided));
    double dsq = 0.0;
    for (auto& p : pieces) {
      if (p.first.empty() && p.second.empty()) continue;
      Geodesic g = atom(p.first, p.second);
      dsq += g.distance * g.distance;
      carriers.push_back(g.carrier);
      out.components.push_back(std::move(g));
    }
    for (const auto& c : out.common) {
      const double diff = c.length_first - c.length_second;
      dsq += diff * diff;
    }
    out.carrier = merge_ascending(carriers);
    out.distance = std::sqrt(dsq);
    return out;
  }

  Geodesic atom(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
    check_deadline(opts_);
    switch (opts_.algorithm) {
      case Algorithm::dynamic: return dynamic(t1, t2, nullptr);
      case Algorithm::divide: return divide(t1, t2);
      case Algorithm::brute: return brute(t1, t2);
    }
    throw std::logic_error("unhandled algorithm");
  }

  Geodesic brute(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
    IncompatibilityPoset poset = checked_poset(t1, t2);
    MaximalChainIterator chains(poset);
    std::size_t count = 0;
    double best_sq = 0.0;
    std::optional<RatioSequence> best;
    while (auto chain = chains.next()) {
      if (++count > opts_.chain_cap)
        throw ChainCapExceeded("more than " + std::to_string(opts_.chain_cap) + " maximal chains");
      if ((count & 1023u) == 0) check_deadline(opts_);
      RatioSequence carrier = path_space_geo(chain_ratios(*chain, poset));
      const double sq = squared_length(carrier);
      if (!best || better(sq, carrier, best_sq, *best)) {
        best_sq = sq;
        best = std::move(carrier);
      }
    }
    return atom_result(std::move(*best), Algorithm::brute);
  }

  Geodesic dynamic(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                   std::vector<DynamicNodeRecord>* trace) {
    IncompatibilityPoset poset = checked_poset(t1, t2);
    struct Entry {
      double dsq;
      RatioSequence carrier;
    };
    std::unordered_map<Bitset, Entry, BitsetHash> memo;
    const PathPosetNode bottom = bottom_node(poset);
    memo.emplace(bottom.added, Entry{0.0, {}});
    std::size_t visits = 0;

    auto dfs = [&](auto&& self, const PathPosetNode& node, const RatioSequence& carrier) -> void {
      if ((++visits & 255u) == 0) check_deadline(opts_);
      std::vector<Cover> covers = covers_above(node, poset);
      std::vector<Ratio> steps;
      steps.reserve(covers.size());
      for (const auto& c : covers) steps.push_back(poset.transition(c.dropped, c.added));
      std::vector<std::size_t> order(covers.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      // lowest transition ratio first
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return compare_ratios(steps[x], steps[y]) < 0;
      });
      for (std::size_t i : order) {
        RatioSequence candidate = extend(carrier, steps[i]);
        const double sq = squared_length(candidate);
        auto it = memo.find(covers[i].node.added);
        if (it != memo.end()) {
          if (!better(sq, candidate, it->second.dsq, it->second.carrier)) continue;
          it->second = Entry{sq, candidate};
        } else {
          memo.emplace(covers[i].node.added, Entry{sq, candidate});
        }
        self(self, covers[i].node, candidate);
      }
    };
    dfs(dfs, bottom, RatioSequence{});

    if (trace) {
      trace->clear();
      for (const auto& [added, entry] : memo)
        trace->push_back({poset.second_splits(added), std::sqrt(entry.dsq), entry.carrier});
      std::sort(trace->begin(), trace->end(), [](const auto& x, const auto& y) {
        if (x.added.size() != y.added.size()) return x.added.size() < y.added.size();
        return x.added < y.added;
      });
    }
    return atom_result(memo.at(poset.all_second()).carrier, Algorithm::dynamic);
  }

  Geodesic divide(const WeightedSplitSet& t1, const WeightedSplitSet& t2) {
    PairKey key{t1, t2};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    IncompatibilityPoset poset = checked_poset(t1, t2);
    std::optional<RatioSequence> best;
    double best_sq = 0.0;
    for (std::size_t cls : poset.minimal_classes()) {
      const auto& g = poset.classes()[cls];
      const Ratio first_step = poset.transition(g.crossing, g.members);
      // Drop X(g) from the first tree and add g: the result shares g with t2.
      WeightedSplitSet shared = t1;
      g.crossing.for_each([&](std::size_t e) { shared.erase(t1[e].split); });
      g.members.for_each([&](std::size_t f) { shared.insert(t2[f].split, t2[f].length); });
      Geodesic rest = solve(shared, t2);
      RatioSequence seq;
      seq.reserve(rest.carrier.size() + 1);
      seq.push_back(first_step);
      seq.insert(seq.end(), rest.carrier.begin(), rest.carrier.end());
      RatioSequence carrier = path_space_geo(seq);
      const double sq = squared_length(carrier);
      if (!best || better(sq, carrier, best_sq, *best)) {
        best_sq = sq;
        best = std::move(carrier);
      }
    }
    Geodesic result = atom_result(std::move(*best), Algorithm::divide);
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  GeoOptions opts_;
  std::unordered_map<PairKey, Geodesic, PairKeyHash> memo_;
};

}  // namespace

Geodesic geodemaps_dynamic(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                           const GeoOptions& opts, std::vector<DynamicNodeRecord>* trace) {
  GeoOptions o = opts;
  o.algorithm = Algorithm::dynamic;
  return Solver(o).dynamic(t1, t2, trace);
}

Geodesic geodemaps_dynamic(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                           const GeoOptions& opts) {
  return geodemaps_dynamic(t1, t2, opts, nullptr);
}

Geodesic geodemaps_divide(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                          const GeoOptions& opts) {
  GeoOptions o = opts;
  o.algorithm = Algorithm::divide;
  return Solver(o).divide(t1, t2);
}

Geodesic brute_force(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                     const GeoOptions& opts) {
  GeoOptions o = opts;
  o.algorithm = Algorithm::brute;
  return Solver(o).brute(t1, t2);
}

double leaf_contribution(const WeightedTree& t1, const WeightedTree& t2) {
  if (!(t1.taxa() == t2.taxa())) throw TaxaMismatchError("trees have different taxa");
  double sum = 0.0;
  for (std::size_t i = 0; i < t1.leaf_lengths().size(); ++i) {
    const double d = t1.leaf_lengths()[i] - t2.leaf_lengths()[i];
    sum += d * d;
  }
  return sum;
}

Geodesic geodesic_between(const WeightedSplitSet& t1, const WeightedSplitSet& t2,
                          const GeoOptions& opts) {
  return Solver(opts).solve(t1, t2);
}

Geodesic geodesic_distance(const WeightedTree& t1, const WeightedTree& t2, const GeoOptions& opts) {
  if (!(t1.taxa() == t2.taxa())) throw TaxaMismatchError("trees have different taxa");
  Geodesic g = geodesic_between(t1.splits(), t2.splits(), opts);
  if (opts.include_leaves) {
    g.leaf_term = leaf_contribution(t1, t2);
    g.distance = std::sqrt(g.distance * g.distance + g.leaf_term);
  }
  return g;
}

}  // namespace treedist
