#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttc/graph.hpp"
#include "ttc/ingest.hpp"

namespace ttc {

struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> cells;  // row-major
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  static ContingencyTable from_labels(std::span<const int> a, std::span<const int> b);
  std::int64_t cell(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

// Adjusted Rand Index over two label vectors of the same items.
double ari(std::span<const int> a, std::span<const int> b);

// Adjusted Mutual Information, normalized by the mean of the entropies.
double ami(std::span<const int> a, std::span<const int> b);

// id -> cluster label
using LabeledPartition = std::map<std::string, int, std::less<>>;

// Aligns by item id; throws DataError when the partitions share no items.
double ari(const LabeledPartition& a, const LabeledPartition& b);
double ami(const LabeledPartition& a, const LabeledPartition& b);

enum class AlignMode {
  union_unclustered,  // items missing from a partition get a reserved label
  intersection,       // restrict to items present in every partition
};

struct MethodComparison {
  std::vector<std::string> names;
  std::vector<double> ami_matrix;  // row-major n x n
  std::vector<double> ari_matrix;
  std::size_t items_compared = 0;
  std::size_t items_dropped = 0;  // nonzero only in intersection mode
};

MethodComparison compare_methods(
    std::span<const std::pair<std::string, LabeledPartition>> partitions,
    AlignMode mode = AlignMode::union_unclustered);

struct TopologyBaseline {
  WeightedGraph graph;  // unit weights over the follow edges
  Partition partition;
  double modularity = 0.0;
};

// Louvain over the followership graph (the topology-based baseline).
TopologyBaseline topology_baseline(const FollowEdgeList& edges, const LouvainConfig& cfg);

}  // namespace ttc
