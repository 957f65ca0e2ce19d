#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ttc/eval.hpp"
#include "ttc/filter.hpp"
#include "ttc/graph.hpp"
#include "ttc/signal.hpp"
#include "ttc/users.hpp"
#include "ttc/version.hpp"

namespace py = pybind11;

namespace {

using Matrix = std::vector<std::vector<double>>;

ttc::UserTopicSignal to_signal(const Matrix& m, const char* name) {
  if (m.empty()) throw ttc::DimensionError(std::string(name) + ": matrix is empty");
  ttc::UserTopicSignal sig(name, m.size(), m.front().size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j].size() != sig.interval_count)
      throw ttc::DimensionError(std::string(name) + ": ragged matrix");
    for (std::size_t t = 0; t < m[j].size(); ++t)
      sig.at(j, t) = static_cast<std::int64_t>(m[j][t]);
  }
  return sig;
}

using Edge = std::tuple<std::string, std::string, double>;

ttc::WeightedGraph graph_from_edges(const std::vector<Edge>& edges) {
  std::set<std::string> id_set;
  for (const auto& [a, b, w] : edges) {
    id_set.insert(a);
    id_set.insert(b);
  }
  std::vector<std::string> ids(id_set.begin(), id_set.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
  ttc::WeightedGraph g(std::move(ids));
  for (const auto& [a, b, w] : edges) g.add_edge(index.at(a), index.at(b), w);
  return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "temporal topic / latent community detection core";
  m.attr("__version__") = ttc::kVersion;

  m.def(
      "xcorr0",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return ttc::xcorr0(std::span<const double>(a), std::span<const double>(b));
      },
      py::arg("a"), py::arg("b"), "Lag-0 inner product of two equal-length series.");

  m.def(
      "ccm",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return ttc::ccm(std::span<const double>(a), std::span<const double>(b));
      },
      py::arg("a"), py::arg("b"),
      "Normalized lag-0 cross-correlation in [0,1]; 0 for all-zero input.");

  m.def(
      "power_spectrum",
      [](const std::vector<double>& x) {
        return ttc::power_spectrum(std::span<const double>(x));
      },
      py::arg("signal"),
      "Squared DFT magnitudes of the mean-removed signal, DC bin excluded.");

  m.def(
      "is_white_noise",
      [](const std::vector<double>& x, double psd_peak_z) {
        ttc::FilterConfig cfg;
        cfg.psd_peak_z = psd_peak_z;
        return ttc::is_white_noise(std::span<const double>(x), cfg);
      },
      py::arg("signal"), py::arg("psd_peak_z") = 0.0,
      "Flat-spectrum test; psd_peak_z 0 selects the bin-count critical value.");

  m.def(
      "xcorr2d_at",
      [](const Matrix& a, const Matrix& b, std::int64_t i, std::int64_t j) {
        return ttc::xcorr2d_at(to_signal(a, "M"), to_signal(b, "N"), i, j);
      },
      py::arg("m"), py::arg("n"), py::arg("i"), py::arg("j"),
      "2D cross-correlation of equal-shape matrices at shift (i, j).");

  m.def(
      "usd",
      [](const Matrix& a, const Matrix& b) {
        return ttc::usd(to_signal(a, "M"), to_signal(b, "N"));
      },
      py::arg("m"), py::arg("n"),
      "Normalized zero-shift 2D cross-correlation (user similarity distance).");

  m.def(
      "louvain",
      [](const std::vector<Edge>& edges, double resolution, std::uint64_t seed) {
        const auto g = graph_from_edges(edges);
        ttc::LouvainConfig cfg;
        cfg.resolution = resolution;
        cfg.seed = seed;
        const auto partition = ttc::louvain(g, cfg);
        std::map<std::string, int> out;
        for (std::size_t v = 0; v < g.node_count(); ++v)
          out[g.ids()[v]] = static_cast<int>(partition[v]);
        return out;
      },
      py::arg("edges"), py::arg("resolution") = 1.0, py::arg("seed") = 0,
      "Louvain clustering over (a, b, weight) edges; returns id -> label.");

  m.def(
      "modularity",
      [](const std::vector<Edge>& edges, const std::map<std::string, int>& labels) {
        const auto g = graph_from_edges(edges);
        ttc::Partition partition(g.node_count());
        for (std::size_t v = 0; v < g.node_count(); ++v) {
          const auto it = labels.find(g.ids()[v]);
          if (it == labels.end())
            throw ttc::ConfigError("label missing for node " + g.ids()[v]);
          partition[v] = static_cast<std::uint32_t>(it->second);
        }
        return ttc::modularity(g, ttc::canonical_labels(partition));
      },
      py::arg("edges"), py::arg("labels"), "Weighted Newman modularity of a labeling.");

  m.def(
      "ari",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return ttc::ari(std::span<const int>(a), std::span<const int>(b));
      },
      py::arg("a"), py::arg("b"), "Adjusted Rand Index of two label vectors.");

  m.def(
      "ami",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return ttc::ami(std::span<const int>(a), std::span<const int>(b));
      },
      py::arg("a"), py::arg("b"), "Adjusted Mutual Information of two label vectors.");
}
