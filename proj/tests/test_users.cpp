#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "ttc/rng.hpp"
#include "ttc/users.hpp"

using namespace ttc;

namespace {

UserTopicSignal from_matrix(const oracle::Matrix& m, std::string id = "u") {
  UserTopicSignal sig(std::move(id), m.size(), m.front().size());
  for (std::size_t j = 0; j < m.size(); ++j)
    for (std::size_t t = 0; t < m[j].size(); ++t)
      sig.at(j, t) = static_cast<std::int64_t>(m[j][t]);
  return sig;
}

oracle::Matrix random_matrix(Rng& rng, std::size_t k, std::size_t l, double density = 0.5) {
  oracle::Matrix m(k, std::vector<double>(l, 0.0));
  for (auto& row : m)
    for (auto& v : row)
      if (rng.uniform01() < density) v = std::floor(rng.uniform(1.0, 20.0));
  return m;
}

std::vector<Topic> two_topics() {
  return {{0, {"c1", "c2"}, 1.0}, {1, {"d1"}, 0.0}};
}

}  // namespace

TEST_CASE("user matrices sum over topic concepts") {
  const TimeGrid grid{0, 10, 4};
  std::vector<PostRecord> records{{"p1", "u1", 25, {"c1", "c2"}}};
  const auto corpus = bucketize(records, grid);
  const auto signals = build_user_topic_signals(corpus, two_topics(), grid);
  REQUIRE(signals.count("u1") == 1);
  const auto& m = signals.at("u1");
  CHECK(m.topic_count == 2);
  CHECK(m.interval_count == 4);
  CHECK(m.at(0, 2) == 2);  // both concepts of topic 0 in one post
  CHECK(m.at(0, 0) == 0);
  CHECK(m.at(1, 2) == 0);
}

TEST_CASE("users without topic concepts keep a zero matrix") {
  const TimeGrid grid{0, 10, 4};
  std::vector<PostRecord> records{
      {"p1", "u1", 5, {"c1"}},
      {"p2", "u2", 5, {"unrelated"}},
  };
  const auto corpus = bucketize(records, grid);
  const auto signals = build_user_topic_signals(corpus, two_topics(), grid);
  REQUIRE(signals.count("u2") == 1);
  CHECK(signals.at("u2").all_zero());
  CHECK_FALSE(signals.at("u1").all_zero());
}

TEST_CASE("user matrices match a per-post recount oracle") {
  const TimeGrid grid{0, 10, 6};
  Rng rng(1001);
  std::vector<Topic> topics{{0, {"a0", "a1", "a2"}, 1.0}, {1, {"b0", "b1"}, 1.0}};
  std::vector<PostRecord> records;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> cs;
    const char* pools[] = {"a0", "a1", "a2", "b0", "b1", "x0"};
    std::set<std::string> chosen;
    for (std::size_t k = 0; k < 1 + rng.uniform_index(3); ++k) chosen.insert(pools[rng.uniform_index(6)]);
    cs.assign(chosen.begin(), chosen.end());
    records.push_back({"p" + std::to_string(i), "u" + std::to_string(rng.uniform_index(20)),
                       static_cast<std::int64_t>(rng.uniform_index(60)), cs});
  }
  const auto corpus = bucketize(records, grid);
  const auto signals = build_user_topic_signals(corpus, topics, grid);

  // direct recount from the raw posts
  std::map<std::string, oracle::Matrix> expected;
  for (const auto& r : records) {
    auto [it, ignored] =
        expected.try_emplace(r.user_id, oracle::Matrix(2, std::vector<double>(6, 0.0)));
    const auto t = static_cast<std::size_t>(r.timestamp / 10);
    for (const auto& c : r.concepts) {
      for (std::size_t j = 0; j < topics.size(); ++j) {
        for (const auto& tc : topics[j].concepts)
          if (tc == c) it->second[j][t] += 1.0;
      }
    }
  }
  REQUIRE(signals.size() == expected.size());
  for (const auto& [uid, m] : expected) {
    const auto& got = signals.at(uid);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 6; ++t)
        CHECK(static_cast<double>(got.at(j, t)) == m[j][t]);
  }
}

TEST_CASE("xcorr2d examples") {
  const auto m = from_matrix({{1, 2}, {3, 4}});
  SUBCASE("zero shift is the squared Frobenius norm") {
    CHECK(xcorr2d_at(m, m, 0, 0) == 1 + 4 + 9 + 16);
  }
  SUBCASE("maximal shift leaves a single overlapping cell") {
    const auto n = from_matrix({{5, 6}, {7, 8}});
    CHECK(xcorr2d_at(m, n, 1, 1) == 4.0 * 5.0);   // M[K-1,L-1] * N[0,0]
    CHECK(xcorr2d_at(m, n, -1, -1) == 1.0 * 8.0);  // M[0,0] * N[K-1,L-1]
  }
  SUBCASE("shape mismatch is an error") {
    const auto n = from_matrix({{1, 2, 3}, {4, 5, 6}});
    CHECK_THROWS_AS(xcorr2d_at(m, n, 0, 0), DimensionError);
  }
}

TEST_CASE("xcorr2d matches the naive shift-and-sum oracle") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_matrix(rng, 5, 10);
    const auto b = random_matrix(rng, 5, 10);
    const auto i = static_cast<std::int64_t>(rng.uniform_index(9)) - 4;
    const auto j = static_cast<std::int64_t>(rng.uniform_index(19)) - 9;
    CHECK(std::fabs(xcorr2d_at(from_matrix(a), from_matrix(b), i, j) -
                    oracle::naive_xcorr2d(a, b, i, j)) <= 1e-9);
  }
}

TEST_CASE("usd examples and properties") {
  Rng rng(61);
  SUBCASE("self-similarity is 1") {
    const auto m = from_matrix(random_matrix(rng, 3, 5, 0.9));
    CHECK(usd(m, m) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("disjoint support gives 0") {
    CHECK(usd(from_matrix({{1, 0}, {2, 0}}), from_matrix({{0, 3}, {0, 4}})) == 0.0);
  }
  SUBCASE("zero matrices are degenerate") {
    CHECK(usd(from_matrix({{0, 0}}), from_matrix({{1, 2}})) == 0.0);
  }
  SUBCASE("scale invariance") {
    const auto a = random_matrix(rng, 4, 6);
    auto doubled = a;
    for (auto& row : doubled)
      for (auto& v : row) v *= 2.0;
    const auto b = random_matrix(rng, 4, 6);
    CHECK(std::fabs(usd(from_matrix(doubled), from_matrix(b)) -
                    usd(from_matrix(a), from_matrix(b))) <= 1e-12);
  }
  SUBCASE("matches the flattened cosine oracle") {
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_matrix(rng, 3, 8);
      const auto b = random_matrix(rng, 3, 8);
      const double got = usd(from_matrix(a), from_matrix(b));
      CHECK(std::fabs(got - oracle::cosine(oracle::flatten(a), oracle::flatten(b))) <= 1e-9);
      CHECK(got == usd(from_matrix(b), from_matrix(a)));  // symmetry
      CHECK(got >= 0.0);
      CHECK(got <= 1.0);
    }
  }
}

TEST_CASE("usd reduces to ccm on flattened matrices") {
  Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(rng, 4, 7);
    const auto b = random_matrix(rng, 4, 7);
    const auto fa = oracle::flatten(a);
    const auto fb = oracle::flatten(b);
    const double via_ccm = ccm(std::span<const double>(fa), std::span<const double>(fb));
    CHECK(std::fabs(usd(from_matrix(a), from_matrix(b)) - via_ccm) <= 1e-12);
  }
}

TEST_CASE("time-shifted activity on the same topic is dissimilar") {
  oracle::Matrix a(3, std::vector<double>(6, 0.0));
  oracle::Matrix b = a;
  a[1][2] = 9.0;
  b[1][4] = 9.0;  // same topic, different interval
  CHECK(usd(from_matrix(a), from_matrix(b)) == 0.0);
}

TEST_CASE("sum_over_time collapses the interval axis") {
  const auto m = from_matrix({{1, 2, 3}, {0, 5, 0}});
  const auto s = sum_over_time(m);
  CHECK(s.topic_count == 2);
  CHECK(s.interval_count == 1);
  CHECK(s.at(0, 0) == 6);
  CHECK(s.at(1, 0) == 5);
}

TEST_CASE("user graph connects similar users and excludes zero matrices") {
  UserSignalMap signals;
  signals.emplace("u1", from_matrix({{3, 0}, {1, 0}}, "u1"));
  signals.emplace("u2", from_matrix({{3, 0}, {1, 0}}, "u2"));
  signals.emplace("u3", from_matrix({{0, 5}, {0, 2}}, "u3"));
  signals.emplace("u4", from_matrix({{0, 0}, {0, 0}}, "u4"));

  CommunityExtractionConfig cfg;
  cfg.edge_threshold = 0.6;
  const auto result = build_user_graph(signals, cfg);
  CHECK(result.zero_signal_users == 1);
  CHECK(result.graph.node_count() == 3);
  CHECK(result.graph.edge_count() == 1);  // only the identical pair

  SUBCASE("threshold 0 keeps every positive-similarity pair") {
    CommunityExtractionConfig all_cfg;
    all_cfg.edge_threshold = 0.0;
    UserSignalMap overlapping;
    overlapping.emplace("a", from_matrix({{1, 1}}, "a"));
    overlapping.emplace("b", from_matrix({{1, 2}}, "b"));
    overlapping.emplace("c", from_matrix({{2, 1}}, "c"));
    const auto complete = build_user_graph(overlapping, all_cfg);
    CHECK(complete.graph.edge_count() == 3);
  }
}

TEST_CASE("user graph edges match a naive pairwise oracle") {
  Rng rng(303);
  UserSignalMap signals;
  std::map<std::string, oracle::Matrix> raw;
  for (int u = 0; u < 30; ++u) {
    const std::string id = "u" + std::to_string(u);
    auto m = random_matrix(rng, 4, 8, 0.3);
    raw[id] = m;
    signals.emplace(id, from_matrix(m, id));
  }
  CommunityExtractionConfig cfg;
  cfg.edge_threshold = 0.4;
  const auto result = build_user_graph(signals, cfg);

  std::set<std::pair<std::string, std::string>> expected;
  for (const auto& [ia, ma] : raw) {
    for (const auto& [ib, mb] : raw) {
      if (ia >= ib) continue;
      if (oracle::flatten(ma) == std::vector<double>(32, 0.0)) continue;
      if (oracle::flatten(mb) == std::vector<double>(32, 0.0)) continue;
      if (oracle::cosine(oracle::flatten(ma), oracle::flatten(mb)) > 0.4) expected.insert({ia, ib});
    }
  }
  std::set<std::pair<std::string, std::string>> got;
  for (std::size_t v = 0; v < result.graph.node_count(); ++v)
    for (const auto& nb : result.graph.neighbors(v))
      if (nb.to > v) got.insert({result.graph.ids()[v], result.graph.ids()[nb.to]});
  CHECK(got == expected);
}

TEST_CASE("extract_communities keeps multi-member clusters only") {
  UserSignalMap signals;
  signals.emplace("u1", from_matrix({{3, 0, 1}}, "u1"));
  signals.emplace("u2", from_matrix({{3, 0, 1}}, "u2"));
  signals.emplace("u3", from_matrix({{0, 5, 0}}, "u3"));

  CommunityExtractionConfig cfg;
  cfg.edge_threshold = 0.6;
  const auto graph = build_user_graph(signals, cfg);
  const auto [communities, diag] = extract_communities(graph.graph, cfg.louvain);
  REQUIRE(communities.size() == 1);
  CHECK(communities[0].members == std::vector<std::string>{"u1", "u2"});
  CHECK(diag.singleton_count == 1);
  CHECK(diag.avg_size == doctest::Approx(2.0));
}

TEST_CASE("an edgeless user graph yields no communities but warns") {
  UserSignalMap signals;
  signals.emplace("u1", from_matrix({{1, 0}}, "u1"));
  signals.emplace("u2", from_matrix({{0, 1}}, "u2"));
  CommunityExtractionConfig cfg;
  const auto graph = build_user_graph(signals, cfg);
  const auto [communities, diag] = extract_communities(graph.graph, cfg.louvain);
  CHECK(communities.empty());
  CHECK_FALSE(diag.warnings.empty());
  CHECK_FALSE(diag.modularity.has_value());
}

TEST_CASE("grid mismatch is rejected") {
  const TimeGrid grid{0, 10, 4};
  std::vector<PostRecord> records{{"p1", "u1", 5, {"c1"}}};
  const auto corpus = bucketize(records, grid);
  const TimeGrid other{0, 20, 4};
  CHECK_THROWS_AS(build_user_topic_signals(corpus, two_topics(), other), ConfigError);
  CHECK_THROWS_AS(build_user_topic_signals(corpus, {}, grid), DataError);
}
