#include "treedist/ratio_geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace treedist {

namespace {

void require_sorted_unique(std::vector<Split>& v) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw OverlappingSplitsError("ratio lists a split twice");
}

// Appends src into dst (both sorted); returns false on a shared element.
bool merge_sorted_into(std::vector<Split>& dst, std::vector<Split>&& src) {
  if (src.empty()) return true;
  if (dst.empty()) {
    dst = std::move(src);
    return true;
  }
  auto mid = static_cast<std::ptrdiff_t>(dst.size());
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
  std::inplace_merge(dst.begin(), dst.begin() + mid, dst.end());
  return std::adjacent_find(dst.begin(), dst.end()) == dst.end();
}

void absorb(Ratio& into, Ratio&& from) {
  into.drop_norm_sq += from.drop_norm_sq;
  into.add_norm_sq += from.add_norm_sq;
  merge_sorted_into(into.dropped, std::move(from.dropped));
  merge_sorted_into(into.added, std::move(from.added));
}

}  // namespace

Ratio::Ratio(double drop_sq, double add_sq, std::vector<Split> drop, std::vector<Split> add)
    : drop_norm_sq(drop_sq), add_norm_sq(add_sq), dropped(std::move(drop)), added(std::move(add)) {
  if (!(drop_norm_sq >= 0.0) || !(add_norm_sq >= 0.0))
    throw std::invalid_argument("ratio norms must be non-negative");
  require_sorted_unique(dropped);
  require_sorted_unique(added);
}

Ratio Ratio::from_sets(const std::vector<Split>& dropped, const WeightedSplitSet& first,
                       const std::vector<Split>& added, const WeightedSplitSet& second) {
  double a = 0.0, b = 0.0;
  for (const auto& s : dropped) {
    auto l = first.length(s);
    if (!l) throw std::invalid_argument("dropped split " + s.to_string() + " not in first tree");
    a += *l * *l;
  }
  for (const auto& s : added) {
    auto l = second.length(s);
    if (!l) throw std::invalid_argument("added split " + s.to_string() + " not in second tree");
    b += *l * *l;
  }
  return Ratio(a, b, dropped, added);
}

double Ratio::drop_norm() const { return std::sqrt(drop_norm_sq); }
double Ratio::add_norm() const { return std::sqrt(add_norm_sq); }

double Ratio::value() const {
  if (add_norm_sq == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(drop_norm_sq / add_norm_sq);
}

int compare_ratios(const Ratio& x, const Ratio& y) {
  const double lhs = x.drop_norm_sq * y.add_norm_sq;
  const double rhs = y.drop_norm_sq * x.add_norm_sq;
  return (lhs > rhs) - (lhs < rhs);
}

Ratio combine(const Ratio& r1, const Ratio& r2) {
  Ratio out = r1;
  out.drop_norm_sq += r2.drop_norm_sq;
  out.add_norm_sq += r2.add_norm_sq;
  if (!merge_sorted_into(out.dropped, std::vector<Split>(r2.dropped)) ||
      !merge_sorted_into(out.added, std::vector<Split>(r2.added)))
    throw OverlappingSplitsError("combined ratios share a split");
  return out;
}

RatioSequence path_space_geo(const RatioSequence& seq, PathSpaceGeoStats* stats) {
  PathSpaceGeoStats local;
  RatioSequence out;
  out.reserve(seq.size());
  for (const auto& r : seq) {
    if (r.degenerate()) continue;
    Ratio current = r;
    while (!out.empty()) {
      ++local.comparisons;
      if (compare_ratios(out.back(), current) < 0) break;
      Ratio prev = std::move(out.back());
      out.pop_back();
      absorb(prev, std::move(current));
      current = std::move(prev);
      ++local.combines;
    }
    out.push_back(std::move(current));
  }
  if (stats) *stats = local;
  return out;
}

bool is_ascending(const RatioSequence& seq) {
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (compare_ratios(seq[i - 1], seq[i]) > 0) return false;
  return true;
}

double squared_length(const RatioSequence& seq) {
  double sum = 0.0;
  for (const auto& r : seq) {
    const double s = r.drop_norm() + r.add_norm();
    sum += s * s;
  }
  return sum;
}

double distance_of(const RatioSequence& ascending) {
  if (!is_ascending(ascending)) throw std::invalid_argument("ratio sequence is not ascending");
  return std::sqrt(squared_length(ascending));
}

RatioSequence merge_ascending(const std::vector<RatioSequence>& seqs) {
  auto less = [](const Ratio& x, const Ratio& y) { return compare_ratios(x, y) < 0; };
  RatioSequence merged;
  for (const auto& s : seqs) {
    if (!is_ascending(s)) throw std::invalid_argument("merge input is not ascending");
    RatioSequence next;
    next.reserve(merged.size() + s.size());
    std::merge(merged.begin(), merged.end(), s.begin(), s.end(), std::back_inserter(next), less);
    merged = std::move(next);
  }
  // Supports must be disjoint.
  std::vector<Split> dropped, added;
  for (const auto& r : merged) {
    dropped.insert(dropped.end(), r.dropped.begin(), r.dropped.end());
    added.insert(added.end(), r.added.begin(), r.added.end());
  }
  std::sort(dropped.begin(), dropped.end());
  std::sort(added.begin(), added.end());
  if (std::adjacent_find(dropped.begin(), dropped.end()) != dropped.end() ||
      std::adjacent_find(added.begin(), added.end()) != added.end())
    throw OverlappingSplitsError("merged carriers share a split");
  // The merge is ascending, so the stack pass only combines ties.
  return path_space_geo(merged);
}

std::strong_ordering compare_block_structure(const RatioSequence& a, const RatioSequence& b) {
  const std::size_t k = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < k; ++i) {
    if (auto c = std::lexicographical_compare_three_way(a[i].dropped.begin(), a[i].dropped.end(),
                                                        b[i].dropped.begin(), b[i].dropped.end());
        c != 0)
      return c;
    if (auto c = std::lexicographical_compare_three_way(a[i].added.begin(), a[i].added.end(),
                                                        b[i].added.begin(), b[i].added.end());
        c != 0)
      return c;
  }
  return a.size() <=> b.size();
}

std::string describe(const Ratio& r) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < r.dropped.size(); ++i) os << (i ? " " : "") << r.dropped[i].to_string();
  os << "} -> {";
  for (std::size_t i = 0; i < r.added.size(); ++i) os << (i ? " " : "") << r.added[i].to_string();
  os << "}  " << r.drop_norm() << '/' << r.add_norm();
  return os.str();
}

}  // namespace treedist
