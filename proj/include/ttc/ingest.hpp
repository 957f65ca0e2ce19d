#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttc/time_grid.hpp"

namespace ttc {

struct PostRecord {
  std::string post_id;
  std::string user_id;  // may be empty: the post then counts for no user
  std::int64_t timestamp = 0;
  std::vector<std::string> concepts;  // trimmed, deduplicated, no empties
};

struct ParseResult {
  std::vector<PostRecord> records;
  std::size_t malformed = 0;
};

// Line-delimited records: {"post_id":..,"user_id":..,"timestamp":..,"concepts":[..]}.
// Malformed lines are counted and skipped; a stream where more than half the
// non-blank lines are malformed is rejected as the wrong file.
ParseResult parse_records(std::istream& in);
ParseResult parse_records_file(const std::string& path);

struct FollowEdgeList {
  std::vector<std::pair<std::string, std::string>> edges;  // canonical a < b, unique
  std::size_t malformed = 0;
};

// Tab-separated user_id pairs; undirected, deduplicated, self-loops dropped.
FollowEdgeList load_follow_edges(std::istream& in);
FollowEdgeList load_follow_edges_file(const std::string& path);

// Immutable post-count indexes over a time grid. Safe to share across threads.
class BucketedCorpus {
 public:
  BucketedCorpus(const TimeGrid& grid, std::span<const PostRecord> records);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<std::string>& concepts() const { return concepts_; }
  const std::vector<std::string>& users() const { return users_; }

  std::optional<std::size_t> concept_index(std::string_view id) const;
  std::optional<std::size_t> user_index(std::string_view id) const;

  // Dense per-interval counts for one concept (length L). A post counts once
  // per concept it contains.
  const std::vector<std::int64_t>& concept_counts(std::size_t concept_idx) const {
    return concept_counts_.at(concept_idx);
  }

  // Sparse per-user index: concept -> interval -> count.
  using SparseCounts = std::map<std::uint32_t, std::map<std::uint32_t, std::int64_t>>;
  const SparseCounts& user_counts(std::size_t user_idx) const {
    return user_counts_.at(user_idx);
  }

  std::size_t post_count() const { return post_count_; }
  std::size_t dropped_out_of_range() const { return dropped_out_of_range_; }

 private:
  TimeGrid grid_;
  std::vector<std::string> concepts_;  // sorted
  std::vector<std::string> users_;     // sorted
  std::vector<std::vector<std::int64_t>> concept_counts_;
  std::vector<SparseCounts> user_counts_;
  std::size_t post_count_ = 0;
  std::size_t dropped_out_of_range_ = 0;
};

BucketedCorpus bucketize(std::span<const PostRecord> records, const TimeGrid& grid);

}  // namespace ttc
