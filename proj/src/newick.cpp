#include "treedist/newick.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "treedist/splits.hpp"

namespace treedist {

namespace {

class NewickParser {
 public:
  NewickParser(std::string_view text, std::optional<double> default_length)
      : text_(text), default_length_(default_length) {}

  RawTree parse() {
    skip_space();
    tree_.root = parse_subtree(-1);
    skip_space();
    if (peek() == ':') {
      ++pos_;
      // root edge length: accepted and ignored
      (void)parse_length();
      skip_space();
    }
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip_space();
    if (pos_ != text_.size()) fail("unexpected text after ';'");
    return std::move(tree_);
  }

 private:
  static constexpr char kEnd = '\0';

  char peek() const { return pos_ < text_.size() ? text_[pos_] : kEnd; }

  [[noreturn]] void fail(const std::string& msg) const { throw NewickError(msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {
        auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  static bool is_label_char(char c) {
    switch (c) {
      case '(': case ')': case ',': case ':': case ';': case '[': case ']': case '\'':
        return false;
      default:
        return !std::isspace(static_cast<unsigned char>(c)) && c != kEnd;
    }
  }

  std::string parse_label() {
    skip_space();
    std::string label;
    if (peek() == '\'') {
      ++pos_;
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            label.push_back('\'');
            ++pos_;
          } else {
            break;
          }
        } else {
          label.push_back(c);
        }
      }
    } else {
      while (is_label_char(peek())) label.push_back(text_[pos_++]);
    }
    return label;
  }

  double parse_length() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '-' || text_[pos_] == '+'))
      ++pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (start == pos_ || ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed branch length");
    }
    if (!(value >= 0.0)) {
      pos_ = start;
      fail("negative branch length");
    }
    return value;
  }

  int parse_subtree(int parent) {
    skip_space();
    int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(RawNode{});
    tree_.nodes[id].parent = parent;
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        int child = parse_subtree(id);
        tree_.nodes[id].children.push_back(child);
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    std::size_t label_pos = pos_;
    tree_.nodes[id].label = parse_label();
    if (tree_.nodes[id].is_leaf() && tree_.nodes[id].label.empty()) {
      pos_ = label_pos;
      fail("leaf without a name");
    }
    skip_space();
    if (parent >= 0) {
      if (peek() == ':') {
        ++pos_;
        tree_.nodes[id].length = parse_length();
      } else if (default_length_) {
        tree_.nodes[id].length = *default_length_;
      } else {
        fail("missing branch length for '" + tree_.nodes[id].label + "'");
      }
    }
    return id;
  }

  std::string_view text_;
  std::optional<double> default_length_;
  std::size_t pos_ = 0;
  RawTree tree_;
};

}  // namespace

std::size_t RawTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const RawNode& n) { return n.is_leaf(); }));
}

std::vector<std::string> RawTree::leaf_names() const {
  std::vector<std::string> names;
  for (const auto& n : nodes)
    if (n.is_leaf()) names.push_back(n.label);
  return names;
}

std::size_t RawTree::zero_length_internal_edges() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (static_cast<int>(i) != root && !nodes[i].is_leaf() && nodes[i].length == 0.0) ++count;
  return count;
}

RawTree parse_newick(std::string_view text, std::optional<double> default_length) {
  if (default_length && !(*default_length >= 0.0))
    throw NewickError("default branch length must be non-negative");
  RawTree tree = NewickParser(text, default_length).parse();
  auto names = tree.leaf_names();
  if (names.size() < 2) throw NewickError("tree has fewer than 2 leaves");
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw NewickError("duplicate leaf name '" + n + "'");
  return tree;
}

std::vector<RawTree> read_newick_stream(std::istream& in, std::optional<double> default_length) {
  std::vector<RawTree> trees;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      trees.push_back(parse_newick(line, default_length));
    } catch (const NewickError& e) {
      throw NewickError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trees;
}

std::vector<RawTree> read_newick_file(const std::string& path,
                                      std::optional<double> default_length) {
  std::ifstream in(path);
  if (!in) throw NewickError("cannot open '" + path + "'");
  return read_newick_stream(in, default_length);
}

TaxaMap::TaxaMap(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw std::invalid_argument("empty taxon name");
    if (!index_.emplace(names_[i], i + 1).second)
      throw std::invalid_argument("duplicate taxon name '" + names_[i] + "'");
  }
}

std::size_t TaxaMap::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown taxon '" + name + "'");
  return it->second;
}

TaxaMap build_taxa_map(const std::vector<RawTree>& trees) {
  if (trees.empty()) throw std::invalid_argument("no trees");
  auto first = trees.front().leaf_names();
  std::set<std::string> reference(first.begin(), first.end());
  for (std::size_t t = 1; t < trees.size(); ++t) {
    auto names = trees[t].leaf_names();
    std::set<std::string> other(names.begin(), names.end());
    if (other == reference) continue;
    std::vector<std::string> diff;
    std::set_symmetric_difference(reference.begin(), reference.end(), other.begin(), other.end(),
                                  std::back_inserter(diff));
    std::ostringstream msg;
    msg << "leaf sets of tree 0 and tree " << t << " differ:";
    for (const auto& d : diff) msg << ' ' << d;
    throw TaxaMismatchError(msg.str());
  }
  return TaxaMap(std::vector<std::string>(reference.begin(), reference.end()));
}

namespace {

std::string quote_label(const std::string& name) {
  bool plain = std::all_of(name.begin(), name.end(), [](char c) {
    switch (c) {
      case '(': case ')': case ',': case ':': case ';': case '[': case ']': case '\'':
        return false;
      default:
        return !std::isspace(static_cast<unsigned char>(c));
    }
  });
  if (plain) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string format_length(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::string write_newick(const WeightedTree& tree, const TaxaMap& taxa) {
  const std::size_t n = tree.taxa_count();
  // Cluster hierarchy: node 0 is the root (all leaves), then one node per split.
  struct Cluster {
    Bitset block;
    double length;
    std::vector<std::size_t> child_clusters;
    std::vector<std::size_t> leaves;
  };
  std::vector<Cluster> clusters;
  Bitset all(n + 1);
  for (std::size_t i = 1; i <= n; ++i) all.set(i);
  clusters.push_back({all, 0.0, {}, {}});
  std::vector<std::size_t> order;
  for (const auto& ws : tree.splits()) {
    clusters.push_back({ws.split.block(), ws.length, {}, {}});
  }
  auto smallest_parent = [&](const Bitset& block, std::size_t self) {
    std::size_t best = 0;
    std::size_t best_size = n + 1;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (c == self) continue;
      const auto& b = clusters[c].block;
      if (b != block && block.is_subset_of(b) && b.count() < best_size) {
        best = c;
        best_size = b.count();
      }
    }
    return best;
  };
  for (std::size_t c = 1; c < clusters.size(); ++c)
    clusters[smallest_parent(clusters[c].block, c)].child_clusters.push_back(c);
  for (std::size_t leaf = 1; leaf <= n; ++leaf) {
    Bitset single(n + 1);
    single.set(leaf);
    clusters[smallest_parent(single, clusters.size())].leaves.push_back(leaf);
  }

  std::ostringstream out;
  auto min_leaf = [&](std::size_t c) { return clusters[c].block.indices().front(); };
  auto emit = [&](auto&& self, std::size_t c) -> void {
    // children ordered by smallest leaf index
    std::vector<std::pair<std::size_t, std::pair<bool, std::size_t>>> kids;
    for (auto cc : clusters[c].child_clusters) kids.push_back({min_leaf(cc), {true, cc}});
    for (auto l : clusters[c].leaves) kids.push_back({l, {false, l}});
    std::sort(kids.begin(), kids.end());
    out << '(';
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (k) out << ',';
      auto [is_cluster, id] = kids[k].second;
      if (is_cluster) {
        self(self, id);
        out << ':' << format_length(clusters[id].length);
      } else {
        out << quote_label(taxa.name(id)) << ':' << format_length(tree.leaf_length(id));
      }
    }
    out << ')';
  };
  emit(emit, 0);
  out << ';';
  return out.str();
}

}  // namespace treedist
