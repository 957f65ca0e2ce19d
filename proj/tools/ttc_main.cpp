#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttc/pipeline.hpp"
#include "ttc/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

ttc::Interval parse_interval(const std::string& s) { return ttc::interval_from_string(s); }

std::vector<double> parse_threshold_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto comma = csv.find(',', pos);
    const std::string item = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    if (!item.empty()) out.push_back(std::stod(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ttc::ConfigError("empty threshold list");
  return out;
}

struct CommonOpts {
  std::string from, to;
  std::uint64_t seed = 42;
  double resolution = 1.0;
  unsigned threads = 0;
};

ttc::PeriodConfig period_from(const CommonOpts& c) {
  ttc::PeriodConfig p;
  if (!c.from.empty()) p.from = ttc::parse_time_utc(c.from);
  if (!c.to.empty()) p.to = ttc::parse_time_utc(c.to);
  return p;
}

void add_common(CLI::App* app, CommonOpts& c) {
  app->add_option("--from", c.from, "period start (epoch seconds or YYYY-MM-DD, UTC)");
  app->add_option("--to", c.to, "period end, exclusive");
  app->add_option("--seed", c.seed, "seed fanned out to all stages")->capture_default_str();
  app->add_option("--resolution", c.resolution, "Louvain resolution")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal topic and latent community detection over annotated post streams"};
  app.set_version_flag("--version", std::string("ttc ") + ttc::kVersion);
  app.require_subcommand(1);

  // ---- topics
  auto* topics = app.add_subcommand("topics", "detect topics from concept signals");
  std::string t_input, t_out, t_interval = "hourly";
  double t_threshold = 0.7, t_rho = 0.9, t_psd_z = 0.0;
  bool t_dump_signals = false, t_dump_graph = false;
  CommonOpts t_common;
  topics->add_option("--input", t_input, "posts file (JSON lines)")->required();
  topics->add_option("--out", t_out, "output directory")->required();
  topics->add_option("--interval", t_interval, "hourly|daily")->capture_default_str();
  topics->add_option("--edge-threshold", t_threshold, "concept graph edge threshold")
      ->capture_default_str();
  topics->add_option("--rho", t_rho, "stop-concept threshold")->capture_default_str();
  topics->add_option("--psd-peak-z", t_psd_z,
                     "white-noise peak z threshold (0 = auto critical value)");
  topics->add_flag("--dump-signals", t_dump_signals, "write per-concept signals CSV");
  topics->add_flag("--dump-graph", t_dump_graph, "write the thresholded concept graph CSV");
  add_common(topics, t_common);

  // ---- communities
  auto* communities = app.add_subcommand("communities", "detect latent user communities");
  std::string c_input, c_topics, c_out, c_interval = "daily";
  double c_threshold = 0.6;
  std::vector<std::string> c_heatmaps;
  CommonOpts c_common;
  communities->add_option("--input", c_input, "posts file (JSON lines)")->required();
  communities->add_option("--topics", c_topics, "topics.json from the topics stage")->required();
  communities->add_option("--out", c_out, "output directory")->required();
  communities->add_option("--interval", c_interval, "hourly|daily")->capture_default_str();
  communities->add_option("--edge-threshold", c_threshold, "user graph edge threshold")
      ->capture_default_str();
  communities->add_option("--heatmap-user", c_heatmaps, "dump topic x interval matrix for a user")
      ->take_all();
  add_common(communities, c_common);

  // ---- sweep
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over intervals and edge thresholds");
  std::string s_input, s_topics, s_out, s_stage = "topics", s_thresholds, s_intervals = "hourly,daily";
  double s_rho = 0.9, s_psd_z = 0.0;
  CommonOpts s_common;
  sweep->add_option("--input", s_input, "posts file (JSON lines)")->required();
  sweep->add_option("--out", s_out, "output directory")->required();
  sweep->add_option("--stage", s_stage, "topics|communities")->capture_default_str();
  sweep->add_option("--thresholds", s_thresholds, "comma list of edge thresholds")->required();
  sweep->add_option("--intervals", s_intervals, "comma list of intervals")->capture_default_str();
  sweep->add_option("--topics", s_topics, "topics.json (required for the communities stage)");
  sweep->add_option("--rho", s_rho, "stop-concept threshold")->capture_default_str();
  sweep->add_option("--psd-peak-z", s_psd_z, "white-noise peak z threshold (0 = auto)");
  add_common(sweep, s_common);

  // ---- baseline-topology
  auto* baseline = app.add_subcommand("baseline-topology", "Louvain over the followership graph");
  std::string b_edges, b_out;
  CommonOpts b_common;
  baseline->add_option("--follow-edges", b_edges, "tab-separated follower edge list")->required();
  baseline->add_option("--out", b_out, "output directory")->required();
  add_common(baseline, b_common);

  // ---- compare
  auto* compare = app.add_subcommand("compare", "AMI/ARI matrices across partition files");
  std::vector<std::string> p_files;
  std::string p_out, p_align = "unclustered";
  compare->add_option("--partitions", p_files, "two or more partition CSV files")
      ->required()
      ->expected(-2);
  compare->add_option("--out", p_out, "output directory")->required();
  compare->add_option("--align", p_align, "unclustered|intersection")->capture_default_str();

  // ---- synth
  auto* synth = app.add_subcommand("synth", "generate a planted synthetic corpus");
  std::string y_spec, y_out;
  std::uint64_t y_seed = 0;
  bool y_seed_set = false;
  synth->add_option("--spec", y_spec, "planted spec JSON (omit for the default layout)");
  synth->add_option("--out", y_out, "output directory")->required();
  auto* y_seed_opt = synth->add_option("--seed", y_seed, "override the spec seed");
  synth->callback([&] { y_seed_set = y_seed_opt->count() > 0; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (topics->parsed()) {
      ttc::TopicsCommand cmd;
      cmd.input_path = t_input;
      cmd.out_dir = t_out;
      cmd.period = period_from(t_common);
      cmd.interval = parse_interval(t_interval);
      cmd.edge_threshold = t_threshold;
      cmd.rho = t_rho;
      cmd.psd_peak_z = t_psd_z;
      cmd.resolution = t_common.resolution;
      cmd.seed = t_common.seed;
      cmd.threads = t_common.threads;
      cmd.dump_signals = t_dump_signals;
      cmd.dump_graph = t_dump_graph;
      const auto run = ttc::run_topics(cmd);
      std::printf("topics: %zu  (survivors %zu of %zu concepts; %zu singletons dropped)\n",
                  run.extraction.topics.size(), run.filter_report.survivors,
                  run.filter_report.rows.size(), run.extraction.diagnostics.singleton_count);
      for (const auto& w : run.extraction.diagnostics.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else if (communities->parsed()) {
      ttc::CommunitiesCommand cmd;
      cmd.input_path = c_input;
      cmd.topics_path = c_topics;
      cmd.out_dir = c_out;
      cmd.period = period_from(c_common);
      cmd.interval = parse_interval(c_interval);
      cmd.edge_threshold = c_threshold;
      cmd.resolution = c_common.resolution;
      cmd.seed = c_common.seed;
      cmd.threads = c_common.threads;
      cmd.heatmap_users = c_heatmaps;
      const auto run = ttc::run_communities(cmd);
      std::printf("communities: %zu  (avg size %.3g; %zu zero-contribution users excluded)\n",
                  run.communities.size(), run.diagnostics.avg_size, run.zero_signal_users);
      for (const auto& w : run.diagnostics.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else if (sweep->parsed()) {
      ttc::SweepCommand cmd;
      cmd.input_path = s_input;
      cmd.topics_path = s_topics;
      cmd.out_dir = s_out;
      cmd.period = period_from(s_common);
      cmd.thresholds = parse_threshold_list(s_thresholds);
      cmd.intervals.clear();
      std::size_t pos = 0;
      while (pos <= s_intervals.size()) {
        const auto comma = s_intervals.find(',', pos);
        const auto item =
            s_intervals.substr(pos, comma == std::string::npos ? s_intervals.size() - pos : comma - pos);
        if (!item.empty()) cmd.intervals.push_back(parse_interval(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (s_stage == "topics")
        cmd.stage = ttc::SweepStage::topics;
      else if (s_stage == "communities")
        cmd.stage = ttc::SweepStage::communities;
      else
        throw ttc::ConfigError("unknown sweep stage '" + s_stage + "'");
      cmd.rho = s_rho;
      cmd.psd_peak_z = s_psd_z;
      cmd.resolution = s_common.resolution;
      cmd.seed = s_common.seed;
      cmd.threads = s_common.threads;
      const auto run = ttc::run_sweep(cmd);
      std::printf("sweep: %zu rows -> %s\n", run.rows.size(), run.csv_path.c_str());
    } else if (baseline->parsed()) {
      ttc::BaselineCommand cmd;
      cmd.edges_path = b_edges;
      cmd.out_dir = b_out;
      cmd.resolution = b_common.resolution;
      cmd.seed = b_common.seed;
      const auto run = ttc::run_baseline_topology(cmd);
      std::printf("topology baseline: %zu communities over %zu nodes, modularity %.4f\n",
                  run.community_count, run.node_count, run.modularity);
    } else if (compare->parsed()) {
      ttc::CompareCommand cmd;
      cmd.partition_paths = p_files;
      cmd.out_dir = p_out;
      if (p_align == "unclustered")
        cmd.align = ttc::AlignMode::union_unclustered;
      else if (p_align == "intersection")
        cmd.align = ttc::AlignMode::intersection;
      else
        throw ttc::ConfigError("unknown align mode '" + p_align + "'");
      const auto run = ttc::run_compare(cmd);
      std::printf("compared %zu partitions over %zu items\n", run.comparison.names.size(),
                  run.comparison.items_compared);
    } else if (synth->parsed()) {
      ttc::SynthCommand cmd;
      cmd.spec_path = y_spec;
      cmd.out_dir = y_out;
      if (y_seed_set) cmd.seed_override = y_seed;
      const auto run = ttc::run_synth(cmd);
      std::printf("synth: %zu posts, %zu concepts, %zu users -> %s\n", run.posts, run.concepts,
                  run.users, run.posts_path.c_str());
    }
  } catch (const ttc::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ttc::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const ttc::DimensionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitOk;
}
