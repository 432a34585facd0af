#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gwnn/graph.hpp"
#include "gwnn/matrix.hpp"

namespace gwnn {

inline constexpr int kUnlabeled = -1;

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

enum class SplitMode {
  kFirstByIndex,
  kSeededRandom,
};

struct SplitSizes {
  std::size_t train_per_class = 20;
  std::size_t val = 500;
  std::size_t test = 1000;
};

// Node-classification dataset: graph, n x p feature matrix, labels in
// [0, c) (kUnlabeled for nodes without one), and disjoint index sets.
struct Dataset {
  Graph graph;
  SparseMatrix features;
  std::vector<int> labels;
  std::size_t num_classes = 0;
  Split split;
  // "file" when splits.tsv was read, otherwise the generator mode.
  std::string split_source = "file";

  std::size_t node_count() const { return graph.node_count(); }
  std::size_t feature_count() const { return features.cols(); }
};

struct LoadOptions {
  SplitMode split_mode = SplitMode::kFirstByIndex;
  std::uint64_t split_seed = 0;
  SplitSizes split_sizes{};
};

// Reads edges.tsv, features.tsv, labels.tsv and (optionally) splits.tsv
// from `dir`. When splits.tsv is absent the split is generated with
// make_standard_split. Throws DataError with file:line on malformed input.
Dataset load_dataset(const std::filesystem::path& dir, const LoadOptions& options = {});

// Writes the four files in canonical order (edges sorted u < v, features in
// CSR order, labels and splits by node index).
void write_dataset(const Dataset& d, const std::filesystem::path& dir);

// `sizes.train_per_class` nodes of every class for training, then the next
// `sizes.val` labelled nodes for validation and the next `sizes.test` for
// testing. Order is node index (kFirstByIndex) or a seeded shuffle.
Split make_standard_split(const std::vector<int>& labels, std::size_t num_classes,
                       SplitMode mode = SplitMode::kFirstByIndex, std::uint64_t seed = 0,
                       const SplitSizes& sizes = {});

std::string to_string(SplitMode mode);

// |train| / n
double label_rate(const Dataset& d);

// Throws DataError if any two split sets share a node or an index is out of range.
void validate_split(const Split& split, std::size_t n, const std::vector<int>& labels);

}  // namespace gwnn
