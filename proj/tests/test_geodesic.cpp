#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "support/support.hpp"
#include "treedist/geodesic.hpp"

using namespace treedist;

namespace {

constexpr Algorithm kAll[] = {Algorithm::dynamic, Algorithm::divide, Algorithm::brute};

GeoOptions with(Algorithm a, bool leaves = false) {
  GeoOptions o;
  o.algorithm = a;
  o.include_leaves = leaves;
  return o;
}

double dist(const WeightedTree& a, const WeightedTree& b, Algorithm alg = Algorithm::divide) {
  return geodesic_distance(a, b, with(alg)).distance;
}

std::pair<WeightedSplitSet, WeightedSplitSet> random_atom(std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    auto a = support::random_split_set(n, rng);
    auto b = support::random_split_set(n, rng);
    if (support::fully_incompatible(a, b)) return {a, b};
  }
}

WeightedSplitSet scaled(const WeightedSplitSet& s, double t) {
  std::vector<WeightedSplit> out;
  for (const auto& w : s) out.push_back({w.split, w.length * t});
  return WeightedSplitSet(s.taxa_count(), out);
}

}  // namespace

TEST_CASE("identical trees are at distance zero") {
  std::mt19937_64 rng(41);
  auto t = support::random_tree(9, rng);
  for (auto a : kAll) CHECK(dist(t, t, a) == 0.0);
}

TEST_CASE("same topology differing in one split") {
  auto [a, b] = support::parse_pair("(((1:1,2:1):0.5,3:1):1,4:1,5:1);", "(((1:1,2:1):0.75,3:1):1,4:1,5:1);");
  for (auto alg : kAll) CHECK(dist(a, b, alg) == doctest::Approx(0.25));
}

TEST_CASE("four-leaf incompatible pair follows the cone path") {
  WeightedSplitSet a(4, {{Split(4, {1, 2}), 1.0}});
  WeightedSplitSet b(4, {{Split(4, {2, 3}), 1.0}});
  CHECK(geodemaps_dynamic(a, b).distance == doctest::Approx(2));
  CHECK(geodemaps_divide(a, b).distance == doctest::Approx(2));
  CHECK(brute_force(a, b).distance == doctest::Approx(2));
}

TEST_CASE("running example") {
  auto [t1, t2] = support::fig6_trees();
  std::vector<DynamicNodeRecord> trace;
  Geodesic g = geodemaps_dynamic(t1.splits(), t2.splits(), {}, &trace);
  CHECK(g.distance == doctest::Approx(2.65).epsilon(0.02 / 2.65));
  CHECK(is_ascending(g.carrier));
  CHECK(g.carrier.size() == 3);

  auto node = [&](std::vector<Split> added) -> const DynamicNodeRecord* {
    std::sort(added.begin(), added.end());
    for (const auto& r : trace) {
      auto s = r.added;
      std::sort(s.begin(), s.end());
      if (s == added) return &r;
    }
    return nullptr;
  };
  const Split f1(6, {2, 3}), f2(6, {1, 2, 3, 6}), f4(6, {4, 5});
  auto n14 = node({f1, f4});
  REQUIRE(n14);
  CHECK(n14->distance == doctest::Approx(1.8444).epsilon(1e-4));
  auto n124 = node({f1, f2, f4});
  REQUIRE(n124);
  CHECK(n124->distance == doctest::Approx(2.4243).epsilon(1e-4));

  const double d = g.distance;
  CHECK(geodemaps_divide(t1.splits(), t2.splits()).distance == doctest::Approx(d).epsilon(1e-12));
  CHECK(brute_force(t1.splits(), t2.splits()).distance == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("adding a middle minimal class of the exponential family splits the problem") {
  auto [t1, t2] = support::exponential_family(3);
  IncompatibilityPoset p(t1, t2);
  // S_2 = {1,2,3,5}
  const Split g(8, {1, 2, 3, 5});
  const auto gi = p.second_indices({g});
  WeightedSplitSet shared = t1;
  for (const auto& e : p.first_splits(p.crossing_of(gi))) shared.erase(e);
  shared.insert(g, *t2.length(g));
  auto d = decompose_at(shared, t2, g);
  CHECK_FALSE(d.above.first.empty());
  CHECK_FALSE(d.above.second.empty());
  CHECK_FALSE(d.below.first.empty());
  CHECK_FALSE(d.below.second.empty());
  CHECK(geodemaps_divide(t1, t2).distance == doctest::Approx(brute_force(t1, t2).distance).epsilon(1e-12));
}

TEST_CASE("core algorithms reject common splits") {
  WeightedSplitSet a(4, {{Split(4, {1, 2}), 1.0}});
  CHECK_THROWS(geodemaps_dynamic(a, a));
  CHECK_THROWS(geodemaps_divide(a, a));
  CHECK_THROWS(brute_force(a, a));
}

TEST_CASE("algorithms agree with brute force on random pairs") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t n = 5 + rep % 4;
    auto a = support::random_tree(n, rng);
    auto b = support::random_tree(n, rng, a.taxa_ptr());
    const double brute = dist(a, b, Algorithm::brute);
    CHECK(dist(a, b, Algorithm::dynamic) == doctest::Approx(brute).epsilon(1e-9));
    CHECK(dist(a, b, Algorithm::divide) == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("symmetry for every algorithm") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 60; ++rep) {
    auto a = support::random_tree(7, rng);
    auto b = support::random_tree(7, rng, a.taxa_ptr());
    for (auto alg : kAll) CHECK(std::abs(dist(a, b, alg) - dist(b, a, alg)) <= 1e-12);
  }
}

TEST_CASE("carrier is ascending and distance matches its length") {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 60; ++rep) {
    auto a = support::random_tree(8, rng);
    auto b = support::random_tree(8, rng, a.taxa_ptr());
    for (auto alg : kAll) {
      Geodesic g = geodesic_distance(a, b, with(alg));
      CHECK(is_ascending(g.carrier));
      double common = 0;
      // normalized splits (one side zero) are already one-sided carrier ratios
      for (const auto& c : g.common)
        if (c.length_first > 0 && c.length_second > 0)
          common += std::pow(c.length_first - c.length_second, 2);
      CHECK(g.distance * g.distance ==
            doctest::Approx(squared_length(path_space_geo(g.carrier)) + common).epsilon(1e-9));
    }
  }
}

TEST_CASE("bounds on atoms") {
  std::mt19937_64 rng(45);
  for (int rep = 0; rep < 60; ++rep) {
    auto [a, b] = random_atom(5 + rep % 4, rng);
    const double d = geodemaps_divide(a, b).distance;
    CHECK(d >= std::hypot(norm(a), norm(b)) * (1 - 1e-12));
    CHECK(d <= (norm(a) + norm(b)) * (1 + 1e-12));
  }
}

TEST_CASE("scale equivariance") {
  std::mt19937_64 rng(46);
  for (int rep = 0; rep < 40; ++rep) {
    auto a = support::random_split_set(7, rng);
    auto b = support::random_split_set(7, rng);
    const double t = 0.1 + 3 * support::uniform_length(rng);
    CHECK(geodesic_between(scaled(a, t), scaled(b, t)).distance ==
          doctest::Approx(t * geodesic_between(a, b).distance).epsilon(1e-9));
  }
}

TEST_CASE("decomposition at a shared split") {
  std::mt19937_64 rng(47);
  int checked = 0;
  for (int rep = 0; rep < 500 && checked < 40; ++rep) {
    auto a = support::random_split_set(8, rng);
    auto b = support::random_split_set(8, rng);
    auto common = common_splits(a, b);
    if (common.size() != 1) continue;
    ++checked;
    auto d = decompose_at(a, b, common.front());
    const double da = geodesic_between(d.above.first, d.above.second, with(Algorithm::brute)).distance;
    const double db = geodesic_between(d.below.first, d.below.second, with(Algorithm::brute)).distance;
    const double full = geodesic_between(a, b, with(Algorithm::brute)).distance;
    CHECK(full == doctest::Approx(std::sqrt(da * da + db * db +
                                            std::pow(d.length_first - d.length_second, 2)))
                      .epsilon(1e-9));
  }
  CHECK(checked > 10);
}

TEST_CASE("splits compatible with the whole other tree") {
  // T2 is a star: every T1 split is compatible with it
  WeightedSplitSet a(5, {{Split(5, {1, 2}), 3.0}, {Split(5, {1, 2, 3}), 4.0}});
  WeightedSplitSet b(5);
  for (auto alg : kAll) CHECK(geodesic_between(a, b, with(alg)).distance == doctest::Approx(5));
  // {4,5} in T2 is compatible with {1,2} and {1,2,3}; {1,3} crosses {1,2}
  WeightedSplitSet c(5, {{Split(5, {4, 5}), 2.0}, {Split(5, {1, 3}), 1.0}});
  const double brute = geodesic_between(a, c, with(Algorithm::brute)).distance;
  CHECK(geodesic_between(a, c, with(Algorithm::dynamic)).distance == doctest::Approx(brute));
  CHECK(geodesic_between(a, c, with(Algorithm::divide)).distance == doctest::Approx(brute));
  // {1,2}:3 → {1,3}:1 is a cone step; {1,2,3}:4 vs 0 and {4,5}: 0 vs 2 are straight
  CHECK(brute == doctest::Approx(std::sqrt(16.0 + 4.0 + 16.0)));
}

TEST_CASE("leaf contribution") {
  auto taxa = support::numbered_taxa(5);
  WeightedSplitSet s(5, {{Split(5, {1, 2}), 1.0}});
  WeightedTree ones(s, std::vector<double>(5, 1.0), taxa);
  WeightedTree zeros(s, std::vector<double>(5, 0.0), taxa);
  CHECK(leaf_contribution(ones, ones) == 0.0);
  CHECK(leaf_contribution(ones, zeros) == doctest::Approx(5));

  std::mt19937_64 rng(48);
  std::vector<double> x(5), y(5);
  double hand = 0;
  for (int i = 0; i < 5; ++i) {
    x[i] = support::uniform_length(rng);
    y[i] = support::uniform_length(rng);
    hand += (x[i] - y[i]) * (x[i] - y[i]);
  }
  WeightedTree p(s, x, taxa), q(s, y, taxa);
  CHECK(leaf_contribution(p, q) == doctest::Approx(hand));
  Geodesic g = geodesic_distance(p, q, with(Algorithm::divide, true));
  CHECK(g.distance == doctest::Approx(std::sqrt(hand)));
  CHECK(g.leaf_term == doctest::Approx(hand));
}

TEST_CASE("taxa mismatch") {
  auto [a, unused] = support::parse_pair("((a:1,b:1):1,c:1,d:1);", "((a:1,b:1):1,c:1,d:1);");
  auto [c, unused2] = support::parse_pair("((a:1,b:1):1,c:1,e:1);", "((a:1,b:1):1,c:1,e:1);");
  CHECK_THROWS_AS(geodesic_distance(a, c), TaxaMismatchError);
}

TEST_CASE("chain cap and deadline") {
  auto [a, b] = support::exponential_family(4);
  GeoOptions o = with(Algorithm::brute);
  o.chain_cap = 2;
  CHECK_THROWS_AS(geodesic_between(a, b, o), ChainCapExceeded);
  GeoOptions late = with(Algorithm::dynamic);
  late.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(geodesic_between(a, b, late), GeodesicTimeout);
}

TEST_CASE("algorithm names") {
  for (auto a : kAll) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("fast"), std::invalid_argument);
}
