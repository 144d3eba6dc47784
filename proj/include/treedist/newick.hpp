#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treedist {

class NewickError : public std::runtime_error {
 public:
  NewickError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  explicit NewickError(const std::string& what)
      : std::runtime_error(what), position_(std::string::npos) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raised when trees that must be compared disagree on their leaf names.
class TaxaMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawNode {
  std::string label;  // leaf name, or the (ignored) internal label
  double length = 0.0;  // length of the edge to the parent
  int parent = -1;
  std::vector<int> children;

  bool is_leaf() const { return children.empty(); }
};

// Parse tree of one Newick statement. Every non-root edge carries a length.
struct RawTree {
  std::vector<RawNode> nodes;
  int root = -1;

  std::size_t leaf_count() const;
  std::vector<std::string> leaf_names() const;
  // Internal (non-root, non-leaf) nodes whose parent edge has length zero;
  // these are contracted when splits are extracted.
  std::size_t zero_length_internal_edges() const;
};

RawTree parse_newick(std::string_view text, std::optional<double> default_length = std::nullopt);

// One tree per non-empty line; lines starting with '#' are comments.
std::vector<RawTree> read_newick_stream(std::istream& in,
                                        std::optional<double> default_length = std::nullopt);
std::vector<RawTree> read_newick_file(const std::string& path,
                                      std::optional<double> default_length = std::nullopt);

// Leaf names in lexicographic order; leaf i (1-based) is names[i-1]. Index 0
// is the root.
class TaxaMap {
 public:
  TaxaMap() = default;
  explicit TaxaMap(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index - 1); }
  // Throws std::out_of_range for unknown names.
  std::size_t index(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  friend bool operator==(const TaxaMap& a, const TaxaMap& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

TaxaMap build_taxa_map(const std::vector<RawTree>& trees);

class WeightedTree;
std::string write_newick(const WeightedTree& tree, const TaxaMap& taxa);

}  // namespace treedist
