#include "ttc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace ttc {

ContingencyTable ContingencyTable::from_labels(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionError("partitions cover different item counts");

  std::unordered_map<int, std::size_t> ra, rb;
  for (const int x : a) ra.emplace(x, ra.size());
  for (const int x : b) rb.emplace(x, rb.size());

  ContingencyTable ct;
  ct.rows = ra.size();
  ct.cols = rb.size();
  ct.cells.assign(ct.rows * ct.cols, 0);
  ct.row_sums.assign(ct.rows, 0);
  ct.col_sums.assign(ct.cols, 0);
  ct.total = static_cast<std::int64_t>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t r = ra.at(a[i]);
    const std::size_t c = rb.at(b[i]);
    ++ct.cells[r * ct.cols + c];
    ++ct.row_sums[r];
    ++ct.col_sums[c];
  }
  return ct;
}

namespace {

double choose2(std::int64_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

double entropy(const std::vector<std::int64_t>& sums, std::int64_t n) {
  double h = 0.0;
  for (const auto s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const ContingencyTable& ct) {
  const double n = static_cast<double>(ct.total);
  double mi = 0.0;
  for (std::size_t i = 0; i < ct.rows; ++i) {
    for (std::size_t j = 0; j < ct.cols; ++j) {
      const std::int64_t nij = ct.cell(i, j);
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      mi += pij * std::log(n * static_cast<double>(nij) /
                           (static_cast<double>(ct.row_sums[i]) *
                            static_cast<double>(ct.col_sums[j])));
    }
  }
  return mi;
}

// Expected MI under the hypergeometric model of random labelings with the
// same marginals.
double expected_mutual_information(const ContingencyTable& ct) {
  const std::int64_t n = ct.total;
  std::vector<double> lgf(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t i = 2; i < lgf.size(); ++i) lgf[i] = std::lgamma(static_cast<double>(i) + 1.0);

  const double dn = static_cast<double>(n);
  double emi = 0.0;
  for (const auto a : ct.row_sums) {
    for (const auto b : ct.col_sums) {
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double term = static_cast<double>(nij) / dn *
                            std::log(dn * static_cast<double>(nij) /
                                     (static_cast<double>(a) * static_cast<double>(b)));
        const double log_p = lgf[a] + lgf[b] + lgf[n - a] + lgf[n - b] - lgf[n] - lgf[nij] -
                             lgf[a - nij] - lgf[b - nij] - lgf[n - a - b + nij];
        emi += term * std::exp(log_p);
      }
    }
  }
  return emi;
}

bool all_singletons(const std::vector<std::int64_t>& sums) {
  return std::all_of(sums.begin(), sums.end(), [](std::int64_t s) { return s == 1; });
}

}  // namespace

double ari(std::span<const int> a, std::span<const int> b) {
  if (a.size() < 2) throw DataError("ari needs at least 2 items");
  const auto ct = ContingencyTable::from_labels(a, b);

  double sum_ij = 0.0;
  for (const auto c : ct.cells) sum_ij += choose2(c);
  double sum_a = 0.0;
  for (const auto s : ct.row_sums) sum_a += choose2(s);
  double sum_b = 0.0;
  for (const auto s : ct.col_sums) sum_b += choose2(s);
  const double pairs = choose2(ct.total);

  const double expected = sum_a * sum_b / pairs;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;  // both partitions trivial
  return (sum_ij - expected) / (maximum - expected);
}

double ami(std::span<const int> a, std::span<const int> b) {
  if (a.size() < 2) throw DataError("ami needs at least 2 items");
  const auto ct = ContingencyTable::from_labels(a, b);

  // Trivial pairs carry no information; identical trivials agree perfectly.
  const bool a_one = ct.rows == 1, b_one = ct.cols == 1;
  const bool a_single = all_singletons(ct.row_sums), b_single = all_singletons(ct.col_sums);
  if ((a_one && b_one) || (a_single && b_single)) return 1.0;

  const double mi = mutual_information(ct);
  const double emi = expected_mutual_information(ct);
  const double mean_h = 0.5 * (entropy(ct.row_sums, ct.total) + entropy(ct.col_sums, ct.total));
  const double denom = mean_h - emi;
  if (std::fabs(denom) < 1e-15) return 0.0;
  return (mi - emi) / denom;
}

namespace {

std::pair<std::vector<int>, std::vector<int>> align_common(const LabeledPartition& a,
                                                           const LabeledPartition& b) {
  std::vector<int> la, lb;
  for (const auto& [id, label] : a) {
    const auto it = b.find(id);
    if (it == b.end()) continue;
    la.push_back(label);
    lb.push_back(it->second);
  }
  if (la.empty()) throw DataError("partitions share no items");
  return {std::move(la), std::move(lb)};
}

}  // namespace

double ari(const LabeledPartition& a, const LabeledPartition& b) {
  const auto [la, lb] = align_common(a, b);
  return ari(std::span<const int>(la), std::span<const int>(lb));
}

double ami(const LabeledPartition& a, const LabeledPartition& b) {
  const auto [la, lb] = align_common(a, b);
  return ami(std::span<const int>(la), std::span<const int>(lb));
}

MethodComparison compare_methods(
    std::span<const std::pair<std::string, LabeledPartition>> partitions, AlignMode mode) {
  if (partitions.size() < 2) throw ConfigError("compare needs at least 2 partitions");

  std::set<std::string> union_ids;
  for (const auto& [name, part] : partitions)
    for (const auto& [id, label] : part) union_ids.insert(id);
  if (union_ids.empty()) throw DataError("all partitions are empty");

  std::vector<std::string> items;
  if (mode == AlignMode::intersection) {
    for (const auto& id : union_ids) {
      const bool everywhere =
          std::all_of(partitions.begin(), partitions.end(),
                      [&](const auto& p) { return p.second.count(id) > 0; });
      if (everywhere) items.push_back(id);
    }
    if (items.empty()) throw DataError("partitions share no items");
  } else {
    items.assign(union_ids.begin(), union_ids.end());
  }

  const std::size_t n = partitions.size();
  std::vector<std::vector<int>> labels(n, std::vector<int>(items.size()));
  for (std::size_t p = 0; p < n; ++p) {
    const auto& part = partitions[p].second;
    int reserved = 0;  // items a method did not cluster share one label
    for (const auto& [id, label] : part) reserved = std::max(reserved, label + 1);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto it = part.find(items[i]);
      labels[p][i] = it != part.end() ? it->second : reserved;
    }
  }

  MethodComparison cmp;
  cmp.items_compared = items.size();
  cmp.items_dropped = union_ids.size() - items.size();
  cmp.ami_matrix.assign(n * n, 1.0);
  cmp.ari_matrix.assign(n * n, 1.0);
  for (const auto& [name, part] : partitions) cmp.names.push_back(name);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v_ami = ami(std::span<const int>(labels[i]), std::span<const int>(labels[j]));
      const double v_ari = ari(std::span<const int>(labels[i]), std::span<const int>(labels[j]));
      cmp.ami_matrix[i * n + j] = cmp.ami_matrix[j * n + i] = v_ami;
      cmp.ari_matrix[i * n + j] = cmp.ari_matrix[j * n + i] = v_ari;
    }
  }
  return cmp;
}

TopologyBaseline topology_baseline(const FollowEdgeList& edges, const LouvainConfig& cfg) {
  if (edges.edges.empty()) throw DataError("empty follower edge list");

  std::set<std::string> user_set;
  for (const auto& [a, b] : edges.edges) {
    user_set.insert(a);
    user_set.insert(b);
  }
  std::vector<std::string> users(user_set.begin(), user_set.end());
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < users.size(); ++i) index.emplace(users[i], i);

  TopologyBaseline result;
  result.graph = WeightedGraph(std::move(users));
  for (const auto& [a, b] : edges.edges)
    result.graph.add_edge(index.at(a), index.at(b), 1.0);
  result.partition = louvain(result.graph, cfg);
  result.modularity = modularity(result.graph, result.partition);
  return result;
}

}  // namespace ttc
