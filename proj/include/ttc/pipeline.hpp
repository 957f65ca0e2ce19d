#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttc/eval.hpp"
#include "ttc/filter.hpp"
#include "ttc/topics.hpp"
#include "ttc/users.hpp"

namespace ttc {

// Shared period/grid options. When absent, `from` defaults to midnight UTC of
// the first post's day and `to` to just past the last post.
struct PeriodConfig {
  std::optional<std::int64_t> from;
  std::optional<std::int64_t> to;
};

struct TopicsCommand {
  std::string input_path;
  std::string out_dir;
  PeriodConfig period;
  Interval interval = Interval::hourly;
  double edge_threshold = 0.7;
  double rho = 0.9;
  double psd_peak_z = 0.0;  // 0 = auto
  double resolution = 1.0;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  bool dump_signals = false;
  bool dump_graph = false;
};

struct TopicsRun {
  TopicExtraction extraction;
  FilterReport filter_report;
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t dropped_out_of_range = 0;
  std::size_t grid_length = 0;
  std::string topics_json_path;
};

TopicsRun run_topics(const TopicsCommand& cmd);

struct CommunitiesCommand {
  std::string input_path;
  std::string topics_path;  // topics.json from run_topics
  std::string out_dir;
  PeriodConfig period;
  Interval interval = Interval::daily;
  double edge_threshold = 0.6;
  double resolution = 1.0;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::vector<std::string> heatmap_users;  // optional per-user matrix dumps
};

struct CommunitiesRun {
  std::vector<Community> communities;
  CommunityDiagnostics diagnostics;
  std::size_t users_total = 0;
  std::size_t zero_signal_users = 0;
  std::size_t records = 0;
};

CommunitiesRun run_communities(const CommunitiesCommand& cmd);

enum class SweepStage { topics, communities };

struct SweepCommand {
  std::string input_path;
  std::string topics_path;  // required for the communities stage
  std::string out_dir;
  PeriodConfig period;
  std::vector<Interval> intervals{Interval::hourly, Interval::daily};
  std::vector<double> thresholds;
  SweepStage stage = SweepStage::topics;
  double rho = 0.9;
  double psd_peak_z = 0.0;
  double resolution = 1.0;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

struct SweepRow {
  Interval interval;
  double threshold = 0.0;
  std::optional<double> modularity;
  std::size_t cluster_count = 0;
  double avg_size = 0.0;
  std::size_t edge_count = 0;
};

struct SweepRun {
  std::vector<SweepRow> rows;
  std::string csv_path;
};

SweepRun run_sweep(const SweepCommand& cmd);

struct BaselineCommand {
  std::string edges_path;
  std::string out_dir;
  double resolution = 1.0;
  std::uint64_t seed = 42;
};

struct BaselineRun {
  double modularity = 0.0;
  std::size_t community_count = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::string partition_path;
};

BaselineRun run_baseline_topology(const BaselineCommand& cmd);

struct CompareCommand {
  std::vector<std::string> partition_paths;  // >= 2 CSV files
  std::string out_dir;
  AlignMode align = AlignMode::union_unclustered;
};

struct CompareRun {
  MethodComparison comparison;
  std::string ami_path;
  std::string ari_path;
};

CompareRun run_compare(const CompareCommand& cmd);

struct SynthCommand {
  std::string spec_path;  // empty = built-in default spec
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
};

struct SynthRun {
  std::size_t posts = 0;
  std::size_t concepts = 0;
  std::size_t users = 0;
  std::string posts_path;
};

SynthRun run_synth(const SynthCommand& cmd);

}  // namespace ttc
