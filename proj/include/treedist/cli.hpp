#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "treedist/geodesic.hpp"
#include "treedist/splits.hpp"

namespace treedist::cli {

enum class Command { dist, matrix, splits };
enum class OutputFormat { csv, tsv, json };

// Exit codes of the treedist tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;  // unreadable file, Newick syntax, bad arguments
inline constexpr int kExitTaxaMismatch = 2;
inline constexpr int kExitChainCap = 3;

struct CliConfig {
  Command command = Command::dist;
  std::string input;
  Algorithm algorithm = Algorithm::divide;
  bool include_leaves = false;
  OutputFormat output = OutputFormat::csv;
  std::optional<double> default_length;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::size_t chain_cap = 1'000'000;
  bool verbose = false;
  bool dot = false;
  std::optional<std::string> out_path;  // matrix destination, stdout if unset
  unsigned threads = 0;                 // 0: hardware concurrency
};

OutputFormat parse_output_format(const std::string& name);

// Parses every tree of the input file against one shared taxa map.
std::vector<WeightedTree> load_trees(const std::string& path, std::optional<double> default_length);

// Symmetric, zero-diagonal matrix of pairwise distances; pairs are computed
// on a bounded pool of worker threads.
std::vector<std::vector<double>> distance_matrix(const std::vector<WeightedTree>& trees,
                                                 const GeoOptions& opts, unsigned threads = 0);

// Fixed notation with 12 digits after the point.
std::string format_distance(double d);

void write_matrix(std::ostream& out, const std::vector<std::vector<double>>& m, OutputFormat fmt);

// These throw on failure; run() maps exceptions to exit codes.
void run_dist(const CliConfig& config, std::ostream& out);
void run_matrix(const CliConfig& config, std::ostream& out);
void run_splits(const CliConfig& config, std::ostream& out);

int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace treedist::cli
