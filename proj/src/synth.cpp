#include "ttc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "ttc/io_util.hpp"
#include "ttc/rng.hpp"

namespace ttc {

void PlantedSpec::validate() const {
  grid.validate();
  if (n_topics == 0 || concepts_per_topic == 0) throw ConfigError("spec has no concepts");
  if (n_communities == 0 || users_per_community == 0) throw ConfigError("spec has no users");
  if (noise_rate < 0.0 || burst_rate < 0.0 || user_post_rate < 0.0)
    throw ConfigError("rates must be nonnegative");
  if (!burst_windows.empty() && burst_windows.size() != n_topics)
    throw ConfigError("burst_windows must list one entry per topic");
  for (const auto& windows : burst_windows) {
    for (const auto& w : windows) {
      if (w.end <= w.begin || w.end > grid.length)
        throw ConfigError("burst window outside the grid");
    }
  }
  if (!communities.empty() && communities.size() != n_communities)
    throw ConfigError("communities must list one plan per community");
  for (const auto& plan : communities) {
    if (plan.topics.empty()) throw ConfigError("community references no topics");
    for (const auto t : plan.topics)
      if (t >= n_topics) throw ConfigError("community references a nonexistent topic");
    if (plan.window.end <= plan.window.begin || plan.window.end > grid.length)
      throw ConfigError("community window outside the grid");
  }
}

PlantedSpec PlantedSpec::with_auto_layout() const {
  PlantedSpec s = *this;
  if (s.burst_windows.empty()) {
    s.burst_windows.resize(s.n_topics);
    const std::size_t block = std::max<std::size_t>(1, s.grid.length / s.n_topics);
    for (std::size_t t = 0; t < s.n_topics; ++t) {
      const std::size_t begin = std::min(t * block, s.grid.length - 1);
      const std::size_t end = t + 1 == s.n_topics ? s.grid.length : std::min((t + 1) * block, s.grid.length);
      s.burst_windows[t] = {{begin, std::max(end, begin + 1)}};
    }
  }
  if (s.communities.empty()) {
    s.communities.resize(s.n_communities);
    const std::size_t window = std::max<std::size_t>(1, s.grid.length / s.n_communities);
    for (std::size_t c = 0; c < s.n_communities; ++c) {
      CommunityPlan plan;
      for (std::size_t t = c; t < s.n_topics; t += s.n_communities) plan.topics.push_back(t);
      if (plan.topics.empty()) plan.topics.push_back(c % s.n_topics);
      const std::size_t begin = std::min(c * window, s.grid.length - 1);
      const std::size_t end =
          c + 1 == s.n_communities ? s.grid.length : std::min((c + 1) * window, s.grid.length);
      plan.window = {begin, std::max(end, begin + 1)};
      s.communities[c] = plan;
    }
  }
  s.validate();
  return s;
}

namespace {

std::string concept_name(std::size_t topic, std::size_t idx) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "concept_t%02zu_%02zu", topic, idx);
  return buf;
}

std::string user_name(std::size_t community, std::size_t idx) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "user_c%02zu_%03zu", community, idx);
  return buf;
}

}  // namespace

SynthResult generate(const PlantedSpec& raw_spec) {
  raw_spec.validate();
  const PlantedSpec spec = raw_spec.with_auto_layout();

  SynthResult result;
  Rng rng(spec.seed);
  std::size_t next_post = 0;
  auto post_id = [&next_post] {
    char buf[24];
    std::snprintf(buf, sizeof buf, "p%08zu", next_post++);
    return std::string(buf);
  };
  auto stamp = [&](std::size_t interval) {
    const std::int64_t lo = spec.grid.start + spec.grid.interval * static_cast<std::int64_t>(interval);
    return lo + static_cast<std::int64_t>(rng.uniform_u64(static_cast<std::uint64_t>(spec.grid.interval)));
  };

  // Background mass: each concept bursts inside its topic windows and drips
  // noise elsewhere. These posts carry no user.
  for (std::size_t t = 0; t < spec.n_topics; ++t) {
    for (std::size_t c = 0; c < spec.concepts_per_topic; ++c) {
      const std::string name = concept_name(t, c);
      result.truth.concept_topic[name] = static_cast<int>(t);
      for (std::size_t i = 0; i < spec.grid.length; ++i) {
        const bool bursting = std::any_of(spec.burst_windows[t].begin(), spec.burst_windows[t].end(),
                                          [&](const IntervalRange& w) { return w.contains(i); });
        const double rate = bursting ? spec.burst_rate : spec.noise_rate;
        const std::int64_t mentions = rng.poisson(rate);
        for (std::int64_t k = 0; k < mentions; ++k) {
          result.posts.push_back({post_id(), "", stamp(i), {name}});
        }
      }
    }
  }

  // Planted users: 1-3 same-topic concepts per post, only inside the
  // community's active window.
  for (std::size_t c = 0; c < spec.n_communities; ++c) {
    const CommunityPlan& plan = spec.communities[c];
    for (std::size_t u = 0; u < spec.users_per_community; ++u) {
      const std::string uid = user_name(c, u);
      result.truth.user_community[uid] = static_cast<int>(c);
      for (std::size_t i = plan.window.begin; i < plan.window.end; ++i) {
        const std::int64_t posts = rng.poisson(spec.user_post_rate);
        for (std::int64_t p = 0; p < posts; ++p) {
          const std::size_t topic = plan.topics[rng.uniform_index(plan.topics.size())];
          const std::size_t k =
              1 + rng.uniform_index(std::min<std::size_t>(3, spec.concepts_per_topic));
          std::vector<std::size_t> picks(spec.concepts_per_topic);
          for (std::size_t x = 0; x < picks.size(); ++x) picks[x] = x;
          rng.shuffle(picks);
          std::vector<std::string> concepts;
          concepts.reserve(k);
          for (std::size_t x = 0; x < k; ++x) concepts.push_back(concept_name(topic, picks[x]));
          std::sort(concepts.begin(), concepts.end());
          result.posts.push_back({post_id(), uid, stamp(i), std::move(concepts)});
        }
      }
    }
  }
  return result;
}

PlantedSpec parse_planted_spec_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("planted spec is not a JSON object");

  PlantedSpec spec;
  try {
    spec.n_topics = j.value("n_topics", spec.n_topics);
    spec.concepts_per_topic = j.value("concepts_per_topic", spec.concepts_per_topic);
    spec.n_communities = j.value("n_communities", spec.n_communities);
    spec.users_per_community = j.value("users_per_community", spec.users_per_community);
    spec.noise_rate = j.value("noise_rate", spec.noise_rate);
    spec.burst_rate = j.value("burst_rate", spec.burst_rate);
    spec.user_post_rate = j.value("user_post_rate", spec.user_post_rate);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      spec.grid.start = g.value("start", spec.grid.start);
      if (g.contains("interval")) {
        if (g.at("interval").is_string())
          spec.grid.interval = seconds_per(interval_from_string(g.at("interval").get<std::string>()));
        else
          spec.grid.interval = g.at("interval").get<std::int64_t>();
      }
      spec.grid.length = g.value("length", spec.grid.length);
    }
    if (j.contains("burst_windows")) {
      for (const auto& per_topic : j.at("burst_windows")) {
        std::vector<IntervalRange> windows;
        for (const auto& w : per_topic)
          windows.push_back({w.at(0).get<std::size_t>(), w.at(1).get<std::size_t>()});
        spec.burst_windows.push_back(std::move(windows));
      }
    }
    if (j.contains("communities")) {
      for (const auto& p : j.at("communities")) {
        CommunityPlan plan;
        for (const auto& t : p.at("topics")) plan.topics.push_back(t.get<std::size_t>());
        plan.window = {p.at("window").at(0).get<std::size_t>(),
                       p.at("window").at(1).get<std::size_t>()};
        spec.communities.push_back(std::move(plan));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad planted spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

PlantedSpec load_planted_spec(const std::string& path) {
  return parse_planted_spec_json(read_text_file(path));
}

void write_posts_jsonl(std::span<const PostRecord> posts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& post : posts) {
    nlohmann::json j;
    j["post_id"] = post.post_id;
    j["user_id"] = post.user_id;
    j["timestamp"] = post.timestamp;
    j["concepts"] = post.concepts;
    out << j.dump() << '\n';
  }
}

void write_ground_truth_csv(const GroundTruth& truth, const std::string& concept_path,
                            const std::string& user_path) {
  {
    std::ofstream out(concept_path);
    if (!out) throw IoError("cannot write " + concept_path);
    out << "id,label\n";
    for (const auto& [id, label] : truth.concept_topic)
      out << csv_escape(id) << ',' << label << '\n';
  }
  {
    std::ofstream out(user_path);
    if (!out) throw IoError("cannot write " + user_path);
    out << "id,label\n";
    for (const auto& [id, label] : truth.user_community)
      out << csv_escape(id) << ',' << label << '\n';
  }
}

}  // namespace ttc
