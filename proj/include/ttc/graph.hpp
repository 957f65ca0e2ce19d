#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ttc/errors.hpp"

namespace ttc {

struct Neighbor {
  std::uint32_t to = 0;
  double weight = 0.0;
};

// Undirected weighted graph. No self-loops; weights nonnegative.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::vector<std::string> ids);

  // Evaluates all C(n,2) pairs of `weight` (assumed symmetric, in [0,1]) and
  // keeps edges strictly above `edge_threshold`. Pairs are streamed: the dense
  // matrix is never materialized. Parallel over row blocks; output identical
  // for any thread count.
  static WeightedGraph build(std::vector<std::string> ids,
                             const std::function<double(std::size_t, std::size_t)>& weight,
                             double edge_threshold, unsigned threads = 0);

  void add_edge(std::size_t a, std::size_t b, double w);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  double total_weight() const { return total_weight_; }
  std::span<const Neighbor> neighbors(std::size_t v) const {
    return {adjacency_[v].data(), adjacency_[v].size()};
  }
  double weighted_degree(std::size_t v) const { return degree_[v]; }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> degree_;
  std::size_t edge_count_ = 0;
  double total_weight_ = 0.0;
};

// Dense cluster labels indexed by node, 0..k-1 in order of first appearance.
using Partition = std::vector<std::uint32_t>;

std::size_t cluster_count(const Partition& p);
Partition canonical_labels(const Partition& p);

struct LouvainConfig {
  double resolution = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t max_passes = 100;

  void validate() const {
    if (resolution <= 0.0) throw ConfigError("louvain resolution must be positive");
    if (max_passes == 0) throw ConfigError("louvain max_passes must be positive");
  }
};

// Weighted Newman modularity. Throws DataError on an edgeless graph.
double modularity(const WeightedGraph& g, const Partition& partition);

// Greedy multi-level modularity optimization. Node visit order is shuffled by
// cfg.seed each pass; equal-gain moves break ties toward the lowest community
// label. An edgeless graph yields all-singletons.
Partition louvain(const WeightedGraph& g, const LouvainConfig& cfg);

void write_graph_csv(const WeightedGraph& g, const std::string& path);
void write_partition_csv(const WeightedGraph& g, const Partition& p, const std::string& path);

}  // namespace ttc
