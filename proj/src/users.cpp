#include "ttc/users.hpp"

#include <algorithm>
#include <cmath>

#include "ttc/parallel.hpp"

namespace ttc {

bool UserTopicSignal::all_zero() const {
  return std::all_of(counts.begin(), counts.end(), [](std::int64_t v) { return v == 0; });
}

void CommunityExtractionConfig::validate() const {
  if (edge_threshold < 0.0 || edge_threshold > 1.0)
    throw ConfigError("edge threshold must be in [0, 1]");
  louvain.validate();
}

UserSignalMap build_user_topic_signals(const BucketedCorpus& corpus,
                                       std::span<const Topic> topics, const TimeGrid& grid) {
  if (topics.empty()) throw DataError("no topics: cannot build user-topic signals");
  if (grid.length != corpus.grid().length || grid.interval != corpus.grid().interval ||
      grid.start != corpus.grid().start)
    throw ConfigError("grid does not match the corpus bucketing");

  const std::size_t k = topics.size();
  const std::size_t l = grid.length;

  // topic row per concept index; concepts outside every topic contribute nothing
  std::vector<std::int32_t> concept_topic(corpus.concepts().size(), -1);
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& c : topics[j].concepts) {
      if (auto idx = corpus.concept_index(c)) concept_topic[*idx] = static_cast<std::int32_t>(j);
    }
  }

  UserSignalMap out;
  for (std::size_t u = 0; u < corpus.users().size(); ++u) {
    UserTopicSignal sig(corpus.users()[u], k, l);
    for (const auto& [concept_idx, per_interval] : corpus.user_counts(u)) {
      const std::int32_t j = concept_topic[concept_idx];
      if (j < 0) continue;
      for (const auto& [t, count] : per_interval) sig.at(static_cast<std::size_t>(j), t) += count;
    }
    out.emplace(sig.user_id, std::move(sig));
  }
  return out;
}

double xcorr2d_at(const UserTopicSignal& m, const UserTopicSignal& n, std::int64_t i,
                  std::int64_t j) {
  if (m.topic_count != n.topic_count || m.interval_count != n.interval_count)
    throw DimensionError("xcorr2d_at: matrix shapes differ");
  const auto k = static_cast<std::int64_t>(m.topic_count);
  const auto l = static_cast<std::int64_t>(m.interval_count);

  const std::int64_t k_lo = std::max<std::int64_t>(0, i);
  const std::int64_t k_hi = std::min(k, k + i);
  const std::int64_t l_lo = std::max<std::int64_t>(0, j);
  const std::int64_t l_hi = std::min(l, l + j);

  double sum = 0.0;
  for (std::int64_t a = k_lo; a < k_hi; ++a) {
    for (std::int64_t b = l_lo; b < l_hi; ++b) {
      sum += static_cast<double>(m.at(a, b)) * static_cast<double>(n.at(a - i, b - j));
    }
  }
  return sum;
}

double usd(const UserTopicSignal& m, const UserTopicSignal& n) {
  const double dot = xcorr2d_at(m, n, 0, 0);
  double fm = 0.0;
  for (const auto v : m.counts) fm += static_cast<double>(v) * static_cast<double>(v);
  double fn = 0.0;
  for (const auto v : n.counts) fn += static_cast<double>(v) * static_cast<double>(v);
  if (fm == 0.0 || fn == 0.0) return 0.0;  // degenerate
  return dot / std::sqrt(fm * fn);
}

UserTopicSignal sum_over_time(const UserTopicSignal& m) {
  UserTopicSignal out(m.user_id, m.topic_count, 1);
  for (std::size_t j = 0; j < m.topic_count; ++j) {
    std::int64_t s = 0;
    for (std::size_t t = 0; t < m.interval_count; ++t) s += m.at(j, t);
    out.at(j, 0) = s;
  }
  return out;
}

UserGraphResult build_user_graph(const UserSignalMap& signals,
                                 const CommunityExtractionConfig& cfg) {
  cfg.validate();
  UserGraphResult result;
  std::vector<std::string> ids;
  std::vector<const UserTopicSignal*> mats;
  for (const auto& [id, sig] : signals) {
    if (sig.all_zero()) {
      ++result.zero_signal_users;  // usd is undefined on a zero matrix
      continue;
    }
    ids.push_back(id);
    mats.push_back(&sig);
  }

  std::vector<double> norms(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    double f = 0.0;
    for (const auto v : mats[i]->counts) f += static_cast<double>(v) * static_cast<double>(v);
    norms[i] = std::sqrt(f);
  }

  auto weight = [&](std::size_t i, std::size_t j) {
    double dot = 0.0;
    const auto& a = mats[i]->counts;
    const auto& b = mats[j]->counts;
    for (std::size_t x = 0; x < a.size(); ++x)
      dot += static_cast<double>(a[x]) * static_cast<double>(b[x]);
    return dot / (norms[i] * norms[j]);
  };
  result.graph = WeightedGraph::build(std::move(ids), weight, cfg.edge_threshold, cfg.threads);
  return result;
}

std::pair<std::vector<Community>, CommunityDiagnostics> extract_communities(
    const WeightedGraph& user_graph, const LouvainConfig& cfg) {
  CommunityDiagnostics diag;
  const Partition partition = louvain(user_graph, cfg);
  if (user_graph.edge_count() > 0) {
    diag.modularity = modularity(user_graph, partition);
  } else {
    diag.warnings.push_back("user graph has no edges; no communities");
  }

  std::vector<std::vector<std::string>> members(cluster_count(partition));
  for (std::uint32_t v = 0; v < partition.size(); ++v)
    members[partition[v]].push_back(user_graph.ids()[v]);

  std::vector<std::vector<std::string>> multi;
  for (auto& group : members) {
    if (group.size() < 2) {  // Def: no single-user communities
      if (!group.empty()) ++diag.singleton_count;
      continue;
    }
    std::sort(group.begin(), group.end());
    multi.push_back(std::move(group));
  }
  std::sort(multi.begin(), multi.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });

  std::vector<Community> communities;
  communities.reserve(multi.size());
  std::size_t member_total = 0;
  for (std::uint32_t i = 0; i < multi.size(); ++i) {
    member_total += multi[i].size();
    communities.push_back({i, std::move(multi[i])});
  }
  diag.community_count = communities.size();
  diag.avg_size = communities.empty()
                      ? 0.0
                      : static_cast<double>(member_total) / static_cast<double>(communities.size());
  return {std::move(communities), diag};
}

}  // namespace ttc
