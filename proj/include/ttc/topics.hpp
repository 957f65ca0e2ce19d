#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttc/filter.hpp"
#include "ttc/graph.hpp"
#include "ttc/signal.hpp"

namespace ttc {

// A multi-concept cluster of the thresholded concept graph.
struct Topic {
  std::uint32_t topic_id = 0;
  std::vector<std::string> concepts;  // sorted, size >= 2
  double mean_edge_weight = 0.0;      // mean weight of intra-topic edges
};

struct TopicExtractionConfig {
  Interval interval = Interval::hourly;
  double edge_threshold = 0.7;
  LouvainConfig louvain;
  unsigned threads = 0;

  void validate() const;
};

struct TopicDiagnostics {
  std::optional<double> modularity;  // empty when the graph has no edges
  std::size_t topic_count = 0;
  std::size_t singleton_count = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::vector<std::string> warnings;
};

struct TopicExtraction {
  std::vector<Topic> topics;  // ids: descending size, ties by smallest member
  TopicDiagnostics diagnostics;
};

// Builds the ccm-weighted concept graph over the surviving signals, clusters
// it, and drops singleton clusters. Requires >= 2 signals.
TopicExtraction extract_topics(const SignalMap& signals, const TopicExtractionConfig& cfg);

// Same, but also hands back the built graph (used by sweeps and tests).
TopicExtraction extract_topics(const SignalMap& signals, const TopicExtractionConfig& cfg,
                               WeightedGraph* graph_out);

WeightedGraph build_concept_graph(const SignalMap& signals, double edge_threshold,
                                  unsigned threads = 0);

}  // namespace ttc
