#include "ttc/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace ttc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_record_line(const std::string& line, PostRecord& out) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  const auto pid = j.find("post_id");
  const auto uid = j.find("user_id");
  const auto ts = j.find("timestamp");
  const auto cs = j.find("concepts");
  if (pid == j.end() || uid == j.end() || ts == j.end() || cs == j.end()) return false;
  if (!pid->is_string() || !uid->is_string() || !ts->is_number_integer() || !cs->is_array())
    return false;

  out.post_id = pid->get<std::string>();
  if (out.post_id.empty()) return false;
  out.user_id = uid->get<std::string>();
  out.timestamp = ts->get<std::int64_t>();

  std::set<std::string> concepts;  // a post counts once per concept it contains
  for (const auto& c : *cs) {
    if (!c.is_string()) return false;
    std::string name = trim(c.get<std::string>());
    if (!name.empty()) concepts.insert(std::move(name));
  }
  out.concepts.assign(concepts.begin(), concepts.end());
  return true;
}

}  // namespace

ParseResult parse_records(std::istream& in) {
  if (!in) throw IoError("cannot read post stream");
  ParseResult result;
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++lines;
    PostRecord rec;
    if (parse_record_line(line, rec)) {
      result.records.push_back(std::move(rec));
    } else {
      ++result.malformed;
    }
  }
  if (in.bad()) throw IoError("I/O failure while reading post stream");
  if (lines > 0 && result.malformed * 2 > lines)
    throw FormatError("more than half of the lines are malformed; wrong input file?");
  return result;
}

ParseResult parse_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open posts file: " + path);
  return parse_records(in);
}

FollowEdgeList load_follow_edges(std::istream& in) {
  if (!in) throw IoError("cannot read edge stream");
  std::set<std::pair<std::string, std::string>> edges;
  FollowEdgeList result;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      ++result.malformed;
      continue;
    }
    std::string a = trim(line.substr(0, tab));
    std::string b = trim(line.substr(tab + 1));
    // tolerate extra trailing columns
    const auto tab2 = b.find('\t');
    if (tab2 != std::string::npos) b = trim(b.substr(0, tab2));
    if (a.empty() || b.empty()) {
      ++result.malformed;
      continue;
    }
    if (a == b) continue;  // self-loop
    if (b < a) std::swap(a, b);
    edges.emplace(std::move(a), std::move(b));
  }
  if (in.bad()) throw IoError("I/O failure while reading edge stream");
  result.edges.assign(edges.begin(), edges.end());
  return result;
}

FollowEdgeList load_follow_edges_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge file: " + path);
  return load_follow_edges(in);
}

BucketedCorpus::BucketedCorpus(const TimeGrid& grid, std::span<const PostRecord> records)
    : grid_(grid) {
  grid_.validate();

  std::set<std::string> concept_set;
  std::set<std::string> user_set;
  for (const auto& rec : records) {
    if (!grid_.bucket(rec.timestamp)) continue;
    for (const auto& c : rec.concepts) concept_set.insert(c);
    if (!rec.user_id.empty()) user_set.insert(rec.user_id);
  }
  concepts_.assign(concept_set.begin(), concept_set.end());
  users_.assign(user_set.begin(), user_set.end());

  std::unordered_map<std::string_view, std::uint32_t> cidx;
  cidx.reserve(concepts_.size());
  for (std::uint32_t i = 0; i < concepts_.size(); ++i) cidx.emplace(concepts_[i], i);
  std::unordered_map<std::string_view, std::uint32_t> uidx;
  uidx.reserve(users_.size());
  for (std::uint32_t i = 0; i < users_.size(); ++i) uidx.emplace(users_[i], i);

  concept_counts_.assign(concepts_.size(), std::vector<std::int64_t>(grid_.length, 0));
  user_counts_.resize(users_.size());

  for (const auto& rec : records) {
    const auto t = grid_.bucket(rec.timestamp);
    if (!t) {
      ++dropped_out_of_range_;
      continue;
    }
    ++post_count_;
    const auto ti = static_cast<std::uint32_t>(*t);
    const bool has_user = !rec.user_id.empty();
    const std::uint32_t ui = has_user ? uidx.at(rec.user_id) : 0;
    for (const auto& c : rec.concepts) {
      const std::uint32_t ci = cidx.at(c);
      ++concept_counts_[ci][ti];
      if (has_user) ++user_counts_[ui][ci][ti];
    }
  }
}

std::optional<std::size_t> BucketedCorpus::concept_index(std::string_view id) const {
  const auto it = std::lower_bound(concepts_.begin(), concepts_.end(), id);
  if (it == concepts_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - concepts_.begin());
}

std::optional<std::size_t> BucketedCorpus::user_index(std::string_view id) const {
  const auto it = std::lower_bound(users_.begin(), users_.end(), id);
  if (it == users_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - users_.begin());
}

BucketedCorpus bucketize(std::span<const PostRecord> records, const TimeGrid& grid) {
  return BucketedCorpus(grid, records);
}

}  // namespace ttc
