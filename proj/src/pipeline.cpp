#include "ttc/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ttc/io_util.hpp"
#include "ttc/parallel.hpp"
#include "ttc/rng.hpp"
#include "ttc/synth.hpp"
#include "ttc/version.hpp"

namespace ttc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string path_join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void write_manifest(const std::string& out_dir, const std::string& command, json config,
                    json counts, std::vector<std::string> outputs) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config"] = std::move(config);
  m["counts"] = std::move(counts);
  m["outputs"] = std::move(outputs);
  write_text_file(path_join(out_dir, command + "_manifest.json"), m.dump(2) + "\n");
}

TimeGrid derive_grid(std::span<const PostRecord> records, const PeriodConfig& period,
                     Interval interval) {
  std::int64_t start = 0;
  std::int64_t end = 0;
  if (period.from && period.to) {
    start = *period.from;
    end = *period.to;
  } else {
    if (records.empty()) throw DataError("no records in input; cannot derive the period");
    std::int64_t lo = records.front().timestamp;
    std::int64_t hi = records.front().timestamp;
    for (const auto& r : records) {
      lo = std::min(lo, r.timestamp);
      hi = std::max(hi, r.timestamp);
    }
    start = period.from ? *period.from : floor_to_utc_midnight(lo);
    end = period.to ? *period.to : hi + 1;
  }
  return TimeGrid::over(start, end, seconds_per(interval));
}

json grid_to_json(const TimeGrid& grid) {
  return json{{"start", grid.start}, {"interval", grid.interval}, {"length", grid.length}};
}

json diagnostics_to_json(const TopicDiagnostics& d) {
  json j;
  if (d.modularity)
    j["modularity"] = *d.modularity;
  else
    j["modularity"] = nullptr;
  j["topic_count"] = d.topic_count;
  j["singleton_count"] = d.singleton_count;
  j["node_count"] = d.node_count;
  j["edge_count"] = d.edge_count;
  j["warnings"] = d.warnings;
  return j;
}

struct TopicsFile {
  std::vector<Topic> topics;
  TimeGrid grid;
  Interval interval = Interval::hourly;
};

TopicsFile read_topics_json(const std::string& path) {
  json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("topics"))
    throw FormatError("not a topics file: " + path);
  TopicsFile f;
  try {
    f.interval = interval_from_string(j.value("interval", std::string("hourly")));
    const auto& g = j.at("grid");
    f.grid = TimeGrid{g.at("start").get<std::int64_t>(), g.at("interval").get<std::int64_t>(),
                      g.at("length").get<std::size_t>()};
    for (const auto& t : j.at("topics")) {
      Topic topic;
      topic.topic_id = t.at("topic_id").get<std::uint32_t>();
      topic.concepts = t.at("concepts").get<std::vector<std::string>>();
      topic.mean_edge_weight = t.value("mean_edge_weight", 0.0);
      f.topics.push_back(std::move(topic));
    }
  } catch (const json::exception& e) {
    throw FormatError("bad topics file " + path + ": " + e.what());
  }
  std::sort(f.topics.begin(), f.topics.end(),
            [](const Topic& a, const Topic& b) { return a.topic_id < b.topic_id; });
  return f;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

TopicsRun run_topics(const TopicsCommand& cmd) {
  ensure_out_dir(cmd.out_dir);

  auto parsed = parse_records_file(cmd.input_path);
  if (parsed.records.empty()) throw DataError("no records in " + cmd.input_path);

  const TimeGrid grid = derive_grid(parsed.records, cmd.period, cmd.interval);
  const BucketedCorpus corpus = bucketize(parsed.records, grid);
  const SignalMap signals = build_concept_signals(corpus);
  if (signals.empty()) throw DataError("no concepts observed inside the period");
  const AllTweetsSignal alltweets = build_alltweets(signals);

  FilterConfig fcfg;
  fcfg.rho = cmd.rho;
  fcfg.psd_peak_z = cmd.psd_peak_z;
  auto [survivors, filter_report] = apply_filters(signals, alltweets, fcfg, cmd.threads);

  TopicExtractionConfig tcfg;
  tcfg.interval = cmd.interval;
  tcfg.edge_threshold = cmd.edge_threshold;
  tcfg.louvain.resolution = cmd.resolution;
  tcfg.louvain.seed = Rng::derive(cmd.seed, "topics.louvain");
  tcfg.threads = cmd.threads;

  TopicsRun run;
  WeightedGraph graph;
  if (survivors.size() >= 2) {
    run.extraction = extract_topics(survivors, tcfg, &graph);
  } else {
    run.extraction.diagnostics.warnings.push_back(
        "fewer than 2 concepts survive filtering; no topics extracted");
  }
  run.filter_report = std::move(filter_report);
  run.records = parsed.records.size();
  run.malformed = parsed.malformed;
  run.dropped_out_of_range = corpus.dropped_out_of_range();
  run.grid_length = grid.length;

  // topics.json: the structured handoff consumed by the communities stage
  json out;
  out["version"] = kVersion;
  out["interval"] = to_string(cmd.interval);
  out["edge_threshold"] = cmd.edge_threshold;
  out["grid"] = grid_to_json(grid);
  out["diagnostics"] = diagnostics_to_json(run.extraction.diagnostics);
  out["topics"] = json::array();
  for (const auto& t : run.extraction.topics) {
    out["topics"].push_back({{"topic_id", t.topic_id},
                             {"concepts", t.concepts},
                             {"mean_edge_weight", t.mean_edge_weight}});
  }
  run.topics_json_path = path_join(cmd.out_dir, "topics.json");
  write_text_file(run.topics_json_path, out.dump(2) + "\n");

  // human-readable summary
  {
    std::ostringstream txt;
    const auto& d = run.extraction.diagnostics;
    txt << "topics: " << d.topic_count;
    if (d.modularity) txt << "  (modularity " << format_double(*d.modularity) << ")";
    txt << "\nsingleton clusters dropped: " << d.singleton_count << "\n";
    for (const auto& w : d.warnings) txt << "warning: " << w << "\n";
    txt << "\n";
    for (const auto& t : run.extraction.topics) {
      txt << "topic " << t.topic_id << " (" << t.concepts.size() << " concepts, mean edge weight "
          << format_double(t.mean_edge_weight) << "):\n";
      for (const auto& c : t.concepts) txt << "    " << c << "\n";
    }
    write_text_file(path_join(cmd.out_dir, "topics.txt"), txt.str());
  }

  // concept -> topic partition of the clustered concepts
  {
    LabeledPartition partition;
    for (const auto& t : run.extraction.topics)
      for (const auto& c : t.concepts) partition[c] = static_cast<int>(t.topic_id);
    if (!partition.empty())
      write_labeled_partition_csv(partition, path_join(cmd.out_dir, "concept_partition.csv"));
  }

  write_filter_report_csv(run.filter_report, path_join(cmd.out_dir, "filter_report.csv"));
  if (cmd.dump_signals) dump_signals_csv(signals, path_join(cmd.out_dir, "signals.csv"));
  if (cmd.dump_graph && survivors.size() >= 2)
    write_graph_csv(graph, path_join(cmd.out_dir, "concept_graph.csv"));

  write_manifest(
      cmd.out_dir, "topics",
      json{{"input", cmd.input_path},
           {"interval", to_string(cmd.interval)},
           {"edge_threshold", cmd.edge_threshold},
           {"rho", cmd.rho},
           {"psd_peak_z", cmd.psd_peak_z == 0.0 ? json("auto") : json(cmd.psd_peak_z)},
           {"resolution", cmd.resolution},
           {"seed", cmd.seed},
           {"grid", grid_to_json(grid)}},
      json{{"records", run.records},
           {"malformed_lines", run.malformed},
           {"dropped_out_of_range", run.dropped_out_of_range},
           {"concepts", signals.size()},
           {"stop_concepts_removed", run.filter_report.stop_removed},
           {"white_noise_removed", run.filter_report.white_noise_removed},
           {"survivors", run.filter_report.survivors},
           {"topics", run.extraction.topics.size()},
           {"singletons_dropped", run.extraction.diagnostics.singleton_count}},
      {"topics.json", "topics.txt", "concept_partition.csv", "filter_report.csv"});
  return run;
}

CommunitiesRun run_communities(const CommunitiesCommand& cmd) {
  ensure_out_dir(cmd.out_dir);

  const TopicsFile topics_file = read_topics_json(cmd.topics_path);
  if (topics_file.topics.empty()) throw DataError("topics file lists no topics");

  auto parsed = parse_records_file(cmd.input_path);
  if (parsed.records.empty()) throw DataError("no records in " + cmd.input_path);

  // Same period as the topic stage unless overridden, re-bucketed on the
  // community interval.
  PeriodConfig period = cmd.period;
  if (!period.from) period.from = topics_file.grid.start;
  if (!period.to) period.to = topics_file.grid.end();
  const TimeGrid grid = derive_grid(parsed.records, period, cmd.interval);

  const BucketedCorpus corpus = bucketize(parsed.records, grid);
  const UserSignalMap user_signals =
      build_user_topic_signals(corpus, topics_file.topics, grid);

  CommunityExtractionConfig ccfg;
  ccfg.interval = cmd.interval;
  ccfg.edge_threshold = cmd.edge_threshold;
  ccfg.louvain.resolution = cmd.resolution;
  ccfg.louvain.seed = Rng::derive(cmd.seed, "communities.louvain");
  ccfg.threads = cmd.threads;

  UserGraphResult ug = build_user_graph(user_signals, ccfg);
  auto [communities, diagnostics] = extract_communities(ug.graph, ccfg.louvain);

  CommunitiesRun run;
  run.communities = std::move(communities);
  run.diagnostics = std::move(diagnostics);
  run.users_total = corpus.users().size();
  run.zero_signal_users = ug.zero_signal_users;
  run.records = parsed.records.size();

  json out;
  out["version"] = kVersion;
  out["interval"] = to_string(cmd.interval);
  out["edge_threshold"] = cmd.edge_threshold;
  out["grid"] = grid_to_json(grid);
  json diag;
  diag["modularity"] = run.diagnostics.modularity ? json(*run.diagnostics.modularity) : json();
  diag["community_count"] = run.diagnostics.community_count;
  diag["avg_size"] = run.diagnostics.avg_size;
  diag["singleton_count"] = run.diagnostics.singleton_count;
  diag["zero_signal_users_excluded"] = run.zero_signal_users;
  diag["warnings"] = run.diagnostics.warnings;
  out["diagnostics"] = diag;
  out["communities"] = json::array();
  for (const auto& c : run.communities) {
    out["communities"].push_back(
        {{"community_id", c.community_id}, {"members", c.members}, {"size", c.members.size()}});
  }
  write_text_file(path_join(cmd.out_dir, "communities.json"), out.dump(2) + "\n");

  {
    LabeledPartition partition;
    for (const auto& c : run.communities)
      for (const auto& m : c.members) partition[m] = static_cast<int>(c.community_id);
    if (!partition.empty())
      write_labeled_partition_csv(partition, path_join(cmd.out_dir, "user_partition.csv"));
  }

  {
    std::ostringstream csv;
    csv << "threshold,modularity,community_count,avg_size\n";
    csv << format_double(cmd.edge_threshold) << ','
        << (run.diagnostics.modularity ? format_double(*run.diagnostics.modularity) : "nan") << ','
        << run.diagnostics.community_count << ',' << format_double(run.diagnostics.avg_size)
        << '\n';
    write_text_file(path_join(cmd.out_dir, "community_diagnostics.csv"), csv.str());
  }

  for (const auto& uid : cmd.heatmap_users) {
    const auto it = user_signals.find(uid);
    if (it == user_signals.end()) continue;
    std::ostringstream csv;
    csv << "topic_id";
    for (std::size_t t = 0; t < it->second.interval_count; ++t) csv << ",t" << t;
    csv << '\n';
    for (std::size_t j = 0; j < it->second.topic_count; ++j) {
      csv << j;
      for (std::size_t t = 0; t < it->second.interval_count; ++t) csv << ',' << it->second.at(j, t);
      csv << '\n';
    }
    write_text_file(path_join(cmd.out_dir, "heatmap_" + uid + ".csv"), csv.str());
  }

  write_manifest(cmd.out_dir, "communities",
                 json{{"input", cmd.input_path},
                      {"topics", cmd.topics_path},
                      {"interval", to_string(cmd.interval)},
                      {"edge_threshold", cmd.edge_threshold},
                      {"resolution", cmd.resolution},
                      {"seed", cmd.seed},
                      {"grid", grid_to_json(grid)}},
                 json{{"records", run.records},
                      {"users", run.users_total},
                      {"zero_signal_users_excluded", run.zero_signal_users},
                      {"graph_nodes", ug.graph.node_count()},
                      {"graph_edges", ug.graph.edge_count()},
                      {"communities", run.communities.size()},
                      {"singletons_dropped", run.diagnostics.singleton_count}},
                 {"communities.json", "user_partition.csv", "community_diagnostics.csv"});
  return run;
}

SweepRun run_sweep(const SweepCommand& cmd) {
  ensure_out_dir(cmd.out_dir);
  if (cmd.thresholds.empty()) throw ConfigError("sweep needs a non-empty threshold list");
  if (cmd.intervals.empty()) throw ConfigError("sweep needs at least one interval");
  for (const double t : cmd.thresholds)
    if (t < 0.0 || t > 1.0) throw ConfigError("sweep thresholds must be in [0, 1]");

  auto parsed = parse_records_file(cmd.input_path);
  if (parsed.records.empty()) throw DataError("no records in " + cmd.input_path);

  TopicsFile topics_file;
  if (cmd.stage == SweepStage::communities) {
    if (cmd.topics_path.empty())
      throw ConfigError("the communities stage sweeps over a fixed topics file (--topics)");
    topics_file = read_topics_json(cmd.topics_path);
    if (topics_file.topics.empty()) throw DataError("topics file lists no topics");
  }

  SweepRun run;
  run.rows.resize(cmd.intervals.size() * cmd.thresholds.size());

  for (std::size_t iv_idx = 0; iv_idx < cmd.intervals.size(); ++iv_idx) {
    const Interval interval = cmd.intervals[iv_idx];
    PeriodConfig period = cmd.period;
    if (cmd.stage == SweepStage::communities) {
      if (!period.from) period.from = topics_file.grid.start;
      if (!period.to) period.to = topics_file.grid.end();
    }
    const TimeGrid grid = derive_grid(parsed.records, period, interval);
    const BucketedCorpus corpus = bucketize(parsed.records, grid);

    if (cmd.stage == SweepStage::topics) {
      const SignalMap signals = build_concept_signals(corpus);
      if (signals.empty()) throw DataError("no concepts observed inside the period");
      const AllTweetsSignal alltweets = build_alltweets(signals);
      FilterConfig fcfg;
      fcfg.rho = cmd.rho;
      fcfg.psd_peak_z = cmd.psd_peak_z;
      auto [survivors, report] = apply_filters(signals, alltweets, fcfg, cmd.threads);

      parallel_chunks(0, cmd.thresholds.size(), cmd.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
          SweepRow row;
          row.interval = interval;
          row.threshold = cmd.thresholds[k];
          if (survivors.size() >= 2) {
            TopicExtractionConfig tcfg;
            tcfg.interval = interval;
            tcfg.edge_threshold = cmd.thresholds[k];
            tcfg.louvain.resolution = cmd.resolution;
            tcfg.louvain.seed = Rng::derive(cmd.seed, "topics.louvain");
            tcfg.threads = 1;  // points already run in parallel
            const auto extraction = extract_topics(survivors, tcfg);
            row.modularity = extraction.diagnostics.modularity;
            row.cluster_count = extraction.topics.size();
            row.edge_count = extraction.diagnostics.edge_count;
            std::size_t members = 0;
            for (const auto& t : extraction.topics) members += t.concepts.size();
            row.avg_size = extraction.topics.empty()
                               ? 0.0
                               : static_cast<double>(members) /
                                     static_cast<double>(extraction.topics.size());
          }
          run.rows[iv_idx * cmd.thresholds.size() + k] = row;
        }
      });
    } else {
      const UserSignalMap user_signals =
          build_user_topic_signals(corpus, topics_file.topics, grid);

      parallel_chunks(0, cmd.thresholds.size(), cmd.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
          SweepRow row;
          row.interval = interval;
          row.threshold = cmd.thresholds[k];
          CommunityExtractionConfig ccfg;
          ccfg.interval = interval;
          ccfg.edge_threshold = cmd.thresholds[k];
          ccfg.louvain.resolution = cmd.resolution;
          ccfg.louvain.seed = Rng::derive(cmd.seed, "communities.louvain");
          ccfg.threads = 1;
          const UserGraphResult ug = build_user_graph(user_signals, ccfg);
          const auto [communities, diag] = extract_communities(ug.graph, ccfg.louvain);
          row.modularity = diag.modularity;
          row.cluster_count = communities.size();
          row.avg_size = diag.avg_size;
          row.edge_count = ug.graph.edge_count();
          run.rows[iv_idx * cmd.thresholds.size() + k] = row;
        }
      });
    }
  }

  std::ostringstream csv;
  csv << "interval,threshold,modularity,cluster_count,avg_size,edge_count\n";
  for (const auto& row : run.rows) {
    csv << to_string(row.interval) << ',' << format_double(row.threshold) << ','
        << (row.modularity ? format_double(*row.modularity) : "nan") << ',' << row.cluster_count
        << ',' << format_double(row.avg_size) << ',' << row.edge_count << '\n';
  }
  run.csv_path = path_join(cmd.out_dir, "sweep.csv");
  write_text_file(run.csv_path, csv.str());

  json intervals_json = json::array();
  for (const auto iv : cmd.intervals) intervals_json.push_back(to_string(iv));
  write_manifest(cmd.out_dir, "sweep",
                 json{{"input", cmd.input_path},
                      {"stage", cmd.stage == SweepStage::topics ? "topics" : "communities"},
                      {"intervals", intervals_json},
                      {"thresholds", cmd.thresholds},
                      {"rho", cmd.rho},
                      {"resolution", cmd.resolution},
                      {"seed", cmd.seed}},
                 json{{"rows", run.rows.size()}}, {"sweep.csv"});
  return run;
}

BaselineRun run_baseline_topology(const BaselineCommand& cmd) {
  ensure_out_dir(cmd.out_dir);
  const FollowEdgeList edges = load_follow_edges_file(cmd.edges_path);
  if (edges.edges.empty()) throw DataError("follower edge list is empty");

  LouvainConfig lcfg;
  lcfg.resolution = cmd.resolution;
  lcfg.seed = Rng::derive(cmd.seed, "baseline.louvain");
  const TopologyBaseline baseline = topology_baseline(edges, lcfg);

  BaselineRun run;
  run.modularity = baseline.modularity;
  run.community_count = cluster_count(baseline.partition);
  run.node_count = baseline.graph.node_count();
  run.edge_count = baseline.graph.edge_count();
  run.partition_path = path_join(cmd.out_dir, "topology_partition.csv");
  write_partition_csv(baseline.graph, baseline.partition, run.partition_path);

  write_manifest(cmd.out_dir, "baseline",
                 json{{"edges", cmd.edges_path}, {"resolution", cmd.resolution}, {"seed", cmd.seed}},
                 json{{"nodes", run.node_count},
                      {"edges", run.edge_count},
                      {"communities", run.community_count},
                      {"modularity", run.modularity},
                      {"malformed_lines", edges.malformed}},
                 {"topology_partition.csv"});
  return run;
}

CompareRun run_compare(const CompareCommand& cmd) {
  ensure_out_dir(cmd.out_dir);
  if (cmd.partition_paths.size() < 2) throw ConfigError("compare needs at least 2 partition files");

  std::vector<std::pair<std::string, LabeledPartition>> partitions;
  for (const auto& path : cmd.partition_paths) {
    partitions.emplace_back(fs::path(path).stem().string(), read_labeled_partition_csv(path));
  }

  CompareRun run;
  run.comparison = compare_methods(partitions, cmd.align);

  const auto write_matrix = [&](const std::vector<double>& m, const std::string& name) {
    std::ostringstream csv;
    csv << "name";
    for (const auto& n : run.comparison.names) csv << ',' << csv_escape(n);
    csv << '\n';
    const std::size_t n = run.comparison.names.size();
    for (std::size_t i = 0; i < n; ++i) {
      csv << csv_escape(run.comparison.names[i]);
      for (std::size_t j = 0; j < n; ++j) csv << ',' << format_double(m[i * n + j]);
      csv << '\n';
    }
    const std::string path = path_join(cmd.out_dir, name);
    write_text_file(path, csv.str());
    return path;
  };
  run.ami_path = write_matrix(run.comparison.ami_matrix, "ami_matrix.csv");
  run.ari_path = write_matrix(run.comparison.ari_matrix, "ari_matrix.csv");

  write_manifest(
      cmd.out_dir, "compare",
      json{{"partitions", cmd.partition_paths},
           {"align", cmd.align == AlignMode::intersection ? "intersection" : "union_unclustered"},
           {"ami_normalizer", "mean"}},
      json{{"items_compared", run.comparison.items_compared},
           {"items_dropped", run.comparison.items_dropped}},
      {"ami_matrix.csv", "ari_matrix.csv"});
  return run;
}

SynthRun run_synth(const SynthCommand& cmd) {
  ensure_out_dir(cmd.out_dir);
  PlantedSpec spec;
  if (!cmd.spec_path.empty()) spec = load_planted_spec(cmd.spec_path);
  if (cmd.seed_override) spec.seed = *cmd.seed_override;

  const SynthResult result = generate(spec);

  SynthRun run;
  run.posts = result.posts.size();
  run.concepts = result.truth.concept_topic.size();
  run.users = result.truth.user_community.size();
  run.posts_path = path_join(cmd.out_dir, "posts.jsonl");
  write_posts_jsonl(result.posts, run.posts_path);
  write_ground_truth_csv(result.truth, path_join(cmd.out_dir, "concept_topics.csv"),
                         path_join(cmd.out_dir, "user_communities.csv"));

  write_manifest(cmd.out_dir, "synth",
                 json{{"spec", cmd.spec_path.empty() ? "(default)" : cmd.spec_path},
                      {"seed", spec.seed},
                      {"n_topics", spec.n_topics},
                      {"concepts_per_topic", spec.concepts_per_topic},
                      {"n_communities", spec.n_communities},
                      {"users_per_community", spec.users_per_community},
                      {"noise_rate", spec.noise_rate},
                      {"burst_rate", spec.burst_rate},
                      {"user_post_rate", spec.user_post_rate},
                      {"grid", grid_to_json(spec.grid)}},
                 json{{"posts", run.posts}, {"concepts", run.concepts}, {"users", run.users}},
                 {"posts.jsonl", "concept_topics.csv", "user_communities.csv"});
  return run;
}

}  // namespace ttc
