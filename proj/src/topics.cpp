#include "ttc/topics.hpp"

#include <algorithm>
#include <unordered_map>

#include "ttc/rng.hpp"

namespace ttc {

void TopicExtractionConfig::validate() const {
  if (edge_threshold < 0.0 || edge_threshold > 1.0)
    throw ConfigError("edge threshold must be in [0, 1]");
  louvain.validate();
}

WeightedGraph build_concept_graph(const SignalMap& signals, double edge_threshold,
                                  unsigned threads) {
  std::vector<std::string> ids;
  ids.reserve(signals.size());
  std::vector<std::vector<double>> values;
  values.reserve(signals.size());
  for (const auto& [id, sig] : signals) {
    ids.push_back(id);
    values.push_back(to_real(sig.values));
  }
  std::vector<double> norms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    norms[i] = l2_norm(std::span<const double>(values[i]));

  auto weight = [&](std::size_t i, std::size_t j) {
    if (norms[i] == 0.0 || norms[j] == 0.0) return 0.0;
    double dot = 0.0;
    const auto& a = values[i];
    const auto& b = values[j];
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    return dot / (norms[i] * norms[j]);
  };
  return WeightedGraph::build(std::move(ids), weight, edge_threshold, threads);
}

namespace {

std::vector<Topic> clusters_to_topics(const WeightedGraph& graph, const Partition& partition,
                                      std::size_t& singletons_out) {
  std::vector<std::vector<std::uint32_t>> members(cluster_count(partition));
  for (std::uint32_t v = 0; v < partition.size(); ++v) members[partition[v]].push_back(v);

  struct Raw {
    std::vector<std::string> concepts;
    double mean_weight;
  };
  std::vector<Raw> raw;
  singletons_out = 0;
  for (const auto& cluster : members) {
    if (cluster.size() < 2) {  // Def: no single-concept topics
      singletons_out += cluster.empty() ? 0 : 1;
      continue;
    }
    Raw r;
    for (const auto v : cluster) r.concepts.push_back(graph.ids()[v]);
    std::sort(r.concepts.begin(), r.concepts.end());

    double w_sum = 0.0;
    std::size_t w_n = 0;
    for (const auto v : cluster) {
      for (const auto& nb : graph.neighbors(v)) {
        if (nb.to > v && partition[nb.to] == partition[v]) {
          w_sum += nb.weight;
          ++w_n;
        }
      }
    }
    r.mean_weight = w_n > 0 ? w_sum / static_cast<double>(w_n) : 0.0;
    raw.push_back(std::move(r));
  }

  // Stable ids across runs: descending size, ties by smallest member.
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.concepts.size() != b.concepts.size()) return a.concepts.size() > b.concepts.size();
    return a.concepts.front() < b.concepts.front();
  });

  std::vector<Topic> topics;
  topics.reserve(raw.size());
  for (std::uint32_t i = 0; i < raw.size(); ++i)
    topics.push_back({i, std::move(raw[i].concepts), raw[i].mean_weight});
  return topics;
}

}  // namespace

TopicExtraction extract_topics(const SignalMap& signals, const TopicExtractionConfig& cfg,
                               WeightedGraph* graph_out) {
  cfg.validate();
  if (signals.size() < 2) throw DataError("topic extraction needs at least 2 surviving concepts");

  WeightedGraph graph = build_concept_graph(signals, cfg.edge_threshold, cfg.threads);
  TopicExtraction result;
  result.diagnostics.node_count = graph.node_count();
  result.diagnostics.edge_count = graph.edge_count();

  const Partition partition = louvain(graph, cfg.louvain);
  if (graph.edge_count() > 0) {
    result.diagnostics.modularity = modularity(graph, partition);
  } else {
    result.diagnostics.warnings.push_back("concept graph has no edges at this threshold");
  }

  result.topics = clusters_to_topics(graph, partition, result.diagnostics.singleton_count);
  result.diagnostics.topic_count = result.topics.size();
  if (result.topics.empty())
    result.diagnostics.warnings.push_back("all clusters are singletons; no topics extracted");

  if (graph_out) *graph_out = std::move(graph);
  return result;
}

TopicExtraction extract_topics(const SignalMap& signals, const TopicExtractionConfig& cfg) {
  return extract_topics(signals, cfg, nullptr);
}

}  // namespace ttc
