#include <iostream>

#include "CLI11.hpp"
#include "treedist/cli.hpp"

namespace tc = treedist::cli;

int main(int argc, char** argv) {
  CLI::App app{"Geodesic distances between phylogenetic trees"};
  app.require_subcommand(1);

  tc::CliConfig config;
  std::string algorithm = "divide";
  std::string output = "csv";
  std::vector<std::size_t> pair;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", config.input, "Newick file, one tree per line")->required();
    sub->add_option("--algorithm,-a", algorithm, "dynamic | divide | brute")
        ->check(CLI::IsMember({"dynamic", "divide", "brute"}));
    sub->add_flag("--leaves", config.include_leaves, "include pendant edge lengths");
    sub->add_option("--default-length", config.default_length,
                    "length for edges without one (otherwise an error)");
    sub->add_option("--chain-cap", config.chain_cap, "maximal chains brute force may enumerate");
  };

  auto* dist = app.add_subcommand("dist", "distance between two trees");
  add_common(dist);
  dist->add_option("--pair", pair, "0-based indices of the two trees")->expected(2);
  dist->add_flag("--verbose,-v", config.verbose, "print the carrier and common splits");

  auto* matrix = app.add_subcommand("matrix", "all pairwise distances");
  add_common(matrix);
  matrix->add_option("--output,-o", output, "csv | tsv | json")
      ->check(CLI::IsMember({"csv", "tsv", "json"}));
  matrix->add_option("--out", config.out_path, "write to file instead of stdout");
  matrix->add_option("--threads", config.threads, "worker threads (0: all cores)");

  auto* splits = app.add_subcommand("splits", "splits, common splits and incompatibility poset");
  add_common(splits);
  splits->add_flag("--dot", config.dot, "emit the poset's Hasse diagram as DOT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tc::kExitInputError;
  }

  config.algorithm = treedist::parse_algorithm(algorithm);
  config.output = tc::parse_output_format(output);
  if (pair.size() == 2) config.pair = std::make_pair(pair[0], pair[1]);
  if (dist->parsed()) config.command = tc::Command::dist;
  else if (matrix->parsed()) config.command = tc::Command::matrix;
  else config.command = tc::Command::splits;

  return tc::run(config, std::cout, std::cerr);
}
