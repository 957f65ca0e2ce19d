#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttc/graph.hpp"
#include "ttc/ingest.hpp"
#include "ttc/topics.hpp"

namespace ttc {

// K (topics) x L (intervals) matrix of one user's contribution counts.
struct UserTopicSignal {
  std::string user_id;
  std::size_t topic_count = 0;     // K
  std::size_t interval_count = 0;  // L
  std::vector<std::int64_t> counts;  // row-major K x L

  UserTopicSignal() = default;
  UserTopicSignal(std::string id, std::size_t k, std::size_t l)
      : user_id(std::move(id)), topic_count(k), interval_count(l), counts(k * l, 0) {}

  std::int64_t& at(std::size_t topic, std::size_t interval) {
    return counts[topic * interval_count + interval];
  }
  std::int64_t at(std::size_t topic, std::size_t interval) const {
    return counts[topic * interval_count + interval];
  }
  bool all_zero() const;
};

using UserSignalMap = std::map<std::string, UserTopicSignal, std::less<>>;

// Entry (j,t) = user's posts at interval t counted once per topic-j concept
// they contain; a post carrying two concepts of the same topic contributes 2.
UserSignalMap build_user_topic_signals(const BucketedCorpus& corpus,
                                       std::span<const Topic> topics,
                                       const TimeGrid& grid);

// 2D cross-correlation of equal-shape matrices at shift (i, j):
// sum over the overlap of M[k,l] * N[k-i, l-j].
double xcorr2d_at(const UserTopicSignal& m, const UserTopicSignal& n, std::int64_t i,
                  std::int64_t j);

// Normalized zero-shift 2D cross-correlation (cosine of the flattened
// matrices); 0 when either matrix is all-zero.
double usd(const UserTopicSignal& m, const UserTopicSignal& n);

// Collapses the time axis (row sums): the de-temporalized variant used to
// demonstrate that time-shifted communities merge without temporal modeling.
UserTopicSignal sum_over_time(const UserTopicSignal& m);

struct CommunityExtractionConfig {
  Interval interval = Interval::daily;
  double edge_threshold = 0.6;
  LouvainConfig louvain;
  unsigned threads = 0;

  void validate() const;
};

struct UserGraphResult {
  WeightedGraph graph;            // nodes: users with nonzero matrices
  std::size_t zero_signal_users = 0;  // excluded, reported
};

UserGraphResult build_user_graph(const UserSignalMap& signals,
                                 const CommunityExtractionConfig& cfg);

// A multi-member cluster of the thresholded user graph.
struct Community {
  std::uint32_t community_id = 0;
  std::vector<std::string> members;  // sorted, size >= 2
};

struct CommunityDiagnostics {
  std::optional<double> modularity;
  std::size_t community_count = 0;
  double avg_size = 0.0;
  std::size_t singleton_count = 0;
  std::vector<std::string> warnings;
};

std::pair<std::vector<Community>, CommunityDiagnostics> extract_communities(
    const WeightedGraph& user_graph, const LouvainConfig& cfg);

}  // namespace ttc
