#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ttc/ingest.hpp"
#include "ttc/time_grid.hpp"

namespace ttc {

struct IntervalRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool contains(std::size_t t) const { return t >= begin && t < end; }
};

struct CommunityPlan {
  std::vector<std::size_t> topics;
  IntervalRange window;
};

// Seeded generator layout: planted topics with bursty windows plus planted
// user communities posting on their topics only inside their active window.
struct PlantedSpec {
  std::size_t n_topics = 5;
  std::size_t concepts_per_topic = 6;
  std::size_t n_communities = 4;
  std::size_t users_per_community = 25;
  TimeGrid grid{0, 3600, 336};
  std::vector<std::vector<IntervalRange>> burst_windows;  // per topic; empty = auto
  std::vector<CommunityPlan> communities;                 // empty = auto
  double noise_rate = 0.2;      // background mentions per concept per interval
  double burst_rate = 20.0;     // mentions per concept per burst interval
  double user_post_rate = 2.0;  // posts per active user per active interval
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError

  // Fills in burst_windows/communities when left empty: topic i bursts in the
  // i-th of n_topics equal blocks of the grid; community c is active in the
  // c-th of n_communities equal windows and owns topics {t : t % n_communities == c}.
  PlantedSpec with_auto_layout() const;
};

struct GroundTruth {
  std::map<std::string, int> concept_topic;
  std::map<std::string, int> user_community;
};

struct SynthResult {
  std::vector<PostRecord> posts;
  GroundTruth truth;
};

// Deterministic given spec.seed. Background/burst mass is emitted as posts
// with an empty user_id so planted community members are the only users.
SynthResult generate(const PlantedSpec& spec);

PlantedSpec parse_planted_spec_json(const std::string& json_text);
PlantedSpec load_planted_spec(const std::string& path);

void write_posts_jsonl(std::span<const PostRecord> posts, const std::string& path);
void write_ground_truth_csv(const GroundTruth& truth, const std::string& concept_path,
                            const std::string& user_path);

}  // namespace ttc
