#include "ttc/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "ttc/io_util.hpp"
#include "ttc/parallel.hpp"
#include "ttc/rng.hpp"

namespace ttc {

WeightedGraph::WeightedGraph(std::vector<std::string> ids)
    : ids_(std::move(ids)), adjacency_(ids_.size()), degree_(ids_.size(), 0.0) {}

void WeightedGraph::add_edge(std::size_t a, std::size_t b, double w) {
  if (a == b) throw ConfigError("self-loops are not allowed");
  if (a >= ids_.size() || b >= ids_.size()) throw ConfigError("edge endpoint out of range");
  if (w < 0.0) throw ConfigError("edge weights must be nonnegative");
  adjacency_[a].push_back({static_cast<std::uint32_t>(b), w});
  adjacency_[b].push_back({static_cast<std::uint32_t>(a), w});
  degree_[a] += w;
  degree_[b] += w;
  total_weight_ += w;
  ++edge_count_;
}

WeightedGraph WeightedGraph::build(std::vector<std::string> ids,
                                   const std::function<double(std::size_t, std::size_t)>& weight,
                                   double edge_threshold, unsigned threads) {
  WeightedGraph g(std::move(ids));
  const std::size_t n = g.node_count();
  if (n < 2) return g;

  // Rows are uneven (n-i-1 pairs), so split the half-matrix by pair count.
  std::vector<std::vector<Neighbor>> upper(n);
  const unsigned t = effective_threads(threads);
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // balanced row ranges per worker
  {
    const double total_pairs = static_cast<double>(n) * (n - 1) / 2.0;
    std::size_t row = 0;
    for (unsigned k = 0; k < t; ++k) {
      const double target = total_pairs * (k + 1) / t;
      std::size_t hi = row;
      double done = static_cast<double>(row) * (2.0 * n - 1.0 - row) / 2.0;
      while (hi < n && done < target) {
        done += static_cast<double>(n - 1 - hi);
        ++hi;
      }
      if (hi > row) ranges.emplace_back(row, hi);
      row = hi;
    }
    if (row < n) ranges.emplace_back(row, n);
  }

  parallel_chunks(0, ranges.size(), static_cast<unsigned>(ranges.size()),
                  [&](std::size_t lo, std::size_t hi) {
                    for (std::size_t r = lo; r < hi; ++r) {
                      for (std::size_t i = ranges[r].first; i < ranges[r].second; ++i) {
                        for (std::size_t j = i + 1; j < n; ++j) {
                          const double w = weight(i, j);
                          if (w > edge_threshold)
                            upper[i].push_back({static_cast<std::uint32_t>(j), w});
                        }
                      }
                    }
                  });

  for (std::size_t i = 0; i < n; ++i)
    for (const auto& nb : upper[i]) g.add_edge(i, nb.to, nb.weight);
  for (auto& adj : g.adjacency_)
    std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
  return g;
}

std::size_t cluster_count(const Partition& p) {
  if (p.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(p.begin(), p.end())) + 1;
}

Partition canonical_labels(const Partition& p) {
  Partition out(p.size());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [it, inserted] = remap.emplace(p[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

double modularity(const WeightedGraph& g, const Partition& partition) {
  if (partition.size() != g.node_count())
    throw ConfigError("partition does not cover the node set");
  const double m = g.total_weight();
  if (g.edge_count() == 0 || m <= 0.0)
    throw DataError("modularity is undefined for an edgeless graph");

  const std::size_t k = cluster_count(partition);
  std::vector<double> internal(k, 0.0);  // edge weight inside each cluster
  std::vector<double> degree(k, 0.0);    // summed weighted degrees
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    degree[partition[v]] += g.weighted_degree(v);
    for (const auto& nb : g.neighbors(v)) {
      if (nb.to > v && partition[nb.to] == partition[v]) internal[partition[v]] += nb.weight;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double frac = degree[c] / (2.0 * m);
    q += internal[c] / m - frac * frac;
  }
  return q;
}

namespace {

// Working graph for one aggregation level; self-loops carry the weight folded
// inside a supernode.
struct LevelGraph {
  std::size_t n = 0;
  std::vector<std::vector<Neighbor>> adj;
  std::vector<double> self_loop;
  std::vector<double> wdeg;  // includes 2 * self_loop
  double m = 0.0;            // total weight: edges once + self-loops

  static LevelGraph from(const WeightedGraph& g) {
    LevelGraph lg;
    lg.n = g.node_count();
    lg.adj.resize(lg.n);
    lg.self_loop.assign(lg.n, 0.0);
    lg.wdeg.assign(lg.n, 0.0);
    for (std::size_t v = 0; v < lg.n; ++v) {
      const auto nbs = g.neighbors(v);
      lg.adj[v].assign(nbs.begin(), nbs.end());
      lg.wdeg[v] = g.weighted_degree(v);
    }
    lg.m = g.total_weight();
    return lg;
  }
};

// One round of local moving; returns the number of moves made. Candidate
// targets are the neighbor communities, the node's own community, and a fresh
// empty community (taken only on strict improvement).
std::size_t local_move(const LevelGraph& g, std::vector<std::uint32_t>& node_comm,
                       std::vector<double>& comm_tot, double resolution, Rng& rng,
                       std::uint32_t max_passes) {
  const double two_m = 2.0 * g.m;
  std::vector<std::size_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> neigh_w(g.n, 0.0);
  std::vector<std::uint32_t> touched;
  touched.reserve(64);

  std::vector<std::uint32_t> comm_size(g.n, 0);
  for (const auto c : node_comm) ++comm_size[c];
  std::vector<std::uint32_t> free_ids;
  for (std::uint32_t c = 0; c < g.n; ++c)
    if (comm_size[c] == 0) free_ids.push_back(c);

  std::size_t total_moves = 0;
  for (std::uint32_t pass = 0; pass < max_passes; ++pass) {
    rng.shuffle(order);
    std::size_t moves = 0;
    for (const std::size_t v : order) {
      const std::uint32_t old_comm = node_comm[v];

      touched.clear();
      for (const auto& nb : g.adj[v]) {
        const std::uint32_t c = node_comm[nb.to];
        if (neigh_w[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end())
          touched.push_back(c);
        neigh_w[c] += nb.weight;
      }
      if (std::find(touched.begin(), touched.end(), old_comm) == touched.end())
        touched.push_back(old_comm);

      comm_tot[old_comm] -= g.wdeg[v];
      --comm_size[old_comm];

      double best_gain = neigh_w[old_comm] - resolution * g.wdeg[v] * comm_tot[old_comm] / two_m;
      std::uint32_t best_comm = old_comm;
      for (const std::uint32_t c : touched) {
        const double gain = neigh_w[c] - resolution * g.wdeg[v] * comm_tot[c] / two_m;
        if (gain > best_gain || (gain == best_gain && c < best_comm)) {
          best_gain = gain;
          best_comm = c;
        }
      }
      // isolation: an empty community has gain 0 (strict improvement only)
      if (0.0 > best_gain && !free_ids.empty()) {
        best_comm = free_ids.back();
        free_ids.pop_back();
        best_gain = 0.0;
      }

      if (best_comm != old_comm) {
        if (comm_size[old_comm] == 0) free_ids.push_back(old_comm);
        ++moves;
      }
      comm_tot[best_comm] += g.wdeg[v];
      ++comm_size[best_comm];
      node_comm[v] = best_comm;

      for (const std::uint32_t c : touched) neigh_w[c] = 0.0;
    }
    total_moves += moves;
    if (moves == 0) break;
  }
  return total_moves;
}

// Objective actually optimized by the local moves (gamma-weighted modularity).
double internal_quality(const LevelGraph& g, const std::vector<std::uint32_t>& node_comm,
                        double resolution) {
  std::uint32_t k = 0;
  for (const auto c : node_comm) k = std::max(k, c + 1);
  std::vector<double> internal(k, 0.0), degree(k, 0.0);
  for (std::size_t v = 0; v < g.n; ++v) {
    degree[node_comm[v]] += g.wdeg[v];
    internal[node_comm[v]] += g.self_loop[v];
    for (const auto& nb : g.adj[v])
      if (nb.to > v && node_comm[nb.to] == node_comm[v]) internal[node_comm[v]] += nb.weight;
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < k; ++c) {
    const double frac = degree[c] / (2.0 * g.m);
    q += internal[c] / g.m - resolution * frac * frac;
  }
  return q;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& node_comm,
                     std::vector<std::uint32_t>& dense_comm_out) {
  // Dense new labels in order of the smallest member index: deterministic.
  std::vector<std::uint32_t> remap(g.n, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < g.n; ++v) {
    if (remap[node_comm[v]] == UINT32_MAX) remap[node_comm[v]] = next++;
  }
  dense_comm_out.resize(g.n);
  for (std::size_t v = 0; v < g.n; ++v) dense_comm_out[v] = remap[node_comm[v]];

  LevelGraph out;
  out.n = next;
  out.adj.resize(out.n);
  out.self_loop.assign(out.n, 0.0);
  out.wdeg.assign(out.n, 0.0);
  out.m = g.m;

  std::vector<std::unordered_map<std::uint32_t, double>> acc(out.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    const std::uint32_t cv = dense_comm_out[v];
    out.self_loop[cv] += g.self_loop[v];
    for (const auto& nb : g.adj[v]) {
      const std::uint32_t cu = dense_comm_out[nb.to];
      if (cu == cv) {
        if (nb.to > v) out.self_loop[cv] += nb.weight;
      } else {
        acc[cv][cu] += nb.weight;
      }
    }
  }
  for (std::uint32_t c = 0; c < out.n; ++c) {
    auto& adj = out.adj[c];
    adj.reserve(acc[c].size());
    for (const auto& [to, w] : acc[c]) adj.push_back({to, w});
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    double d = 2.0 * out.self_loop[c];
    for (const auto& nb : adj) d += nb.weight;
    out.wdeg[c] = d;
  }
  return out;
}

// One full multi-level sweep: local moves on the base graph starting from
// `init`, then the usual aggregate-and-repeat hierarchy.
Partition multilevel_sweep(const LevelGraph& base, const Partition& init, double resolution,
                           Rng& rng, std::uint32_t max_passes) {
  std::vector<std::uint32_t> node_comm = init;
  std::vector<double> comm_tot(base.n, 0.0);
  for (std::size_t v = 0; v < base.n; ++v) comm_tot[node_comm[v]] += base.wdeg[v];
  local_move(base, node_comm, comm_tot, resolution, rng, max_passes);

  std::vector<std::uint32_t> composed;
  LevelGraph level = aggregate(base, node_comm, composed);

  for (;;) {
    std::vector<std::uint32_t> comm(level.n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> tot = level.wdeg;
    const std::size_t moves = local_move(level, comm, tot, resolution, rng, max_passes);
    if (moves == 0) break;

    std::vector<std::uint32_t> dense;
    LevelGraph next = aggregate(level, comm, dense);
    for (auto& label : composed) label = dense[label];
    level = std::move(next);
  }
  return composed;
}

}  // namespace

namespace {

// Warm-start refinement: full sweeps from the current partition until nothing
// changes.
Partition converge(const LevelGraph& base, Partition p, double resolution, Rng& rng,
                   std::uint32_t max_passes) {
  constexpr int kMaxRefinements = 16;
  for (int round = 0; round < kMaxRefinements; ++round) {
    Partition next = canonical_labels(multilevel_sweep(base, p, resolution, rng, max_passes));
    if (next == p) break;
    p = std::move(next);
  }
  return p;
}

}  // namespace

Partition louvain(const WeightedGraph& g, const LouvainConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.node_count();
  Partition singletons(n);
  std::iota(singletons.begin(), singletons.end(), 0);
  if (g.edge_count() == 0) return singletons;

  const LevelGraph base = LevelGraph::from(g);

  // Greedy sweeps are order-sensitive and can lock into poor dyads, so the
  // optimizer is an iterated local search: seeded restarts (singleton and
  // random initializations) plus perturb-and-reconverge rounds, keeping the
  // best converged partition. Deterministic given cfg.seed.
  constexpr int kRestarts = 4;
  constexpr int kPerturbRounds = 4;

  Partition best;
  double best_q = 0.0;
  for (int restart = 0; restart < kRestarts; ++restart) {
    Rng rng(Rng::derive(cfg.seed, "louvain/" + std::to_string(restart)));

    Partition p;
    if (restart == 0) {
      p = singletons;
    } else {
      p.resize(n);
      const std::size_t groups = 2 + rng.uniform_index(std::max<std::size_t>(n / 2, 1));
      for (auto& label : p) label = static_cast<std::uint32_t>(rng.uniform_index(groups));
      p = canonical_labels(p);
    }
    p = converge(base, std::move(p), cfg.resolution, rng, cfg.max_passes);
    double q = internal_quality(base, p, cfg.resolution);

    for (int round = 0; round < kPerturbRounds; ++round) {
      Partition shaken = p;
      const std::size_t k = cluster_count(shaken);
      for (auto& label : shaken) {
        if (rng.uniform01() < 0.3)
          label = static_cast<std::uint32_t>(rng.uniform_index(k + 1));
      }
      shaken = converge(base, canonical_labels(shaken), cfg.resolution, rng, cfg.max_passes);
      const double shaken_q = internal_quality(base, shaken, cfg.resolution);
      if (shaken_q > q + 1e-15) {
        p = std::move(shaken);
        q = shaken_q;
      }
    }

    if (best.empty() || q > best_q + 1e-15) {
      best = std::move(p);
      best_q = q;
    }
  }
  return canonical_labels(best);
}

void write_graph_csv(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "id_a,id_b,weight\n";
  char buf[32];
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    for (const auto& nb : g.neighbors(v)) {
      if (nb.to <= v) continue;
      std::snprintf(buf, sizeof buf, ",%.9g\n", nb.weight);
      out << csv_escape(g.ids()[v]) << ',' << csv_escape(g.ids()[nb.to]) << buf;
    }
  }
}

void write_partition_csv(const WeightedGraph& g, const Partition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "id,label\n";
  for (std::size_t v = 0; v < g.node_count(); ++v)
    out << csv_escape(g.ids()[v]) << ',' << p[v] << '\n';
}

}  // namespace ttc
