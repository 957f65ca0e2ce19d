#include "ttc/signal.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "ttc/errors.hpp"

namespace ttc {

std::int64_t ConceptSignal::total() const {
  return std::accumulate(values.begin(), values.end(), std::int64_t{0});
}

SignalMap build_concept_signals(const BucketedCorpus& corpus) {
  SignalMap out;
  const auto& roster = corpus.concepts();
  for (std::size_t i = 0; i < roster.size(); ++i) {
    out.emplace(roster[i], ConceptSignal{roster[i], corpus.concept_counts(i)});
  }
  return out;
}

AllTweetsSignal build_alltweets(const SignalMap& signals) {
  if (signals.empty()) throw DataError("cannot build AllTweets from an empty signal map");
  AllTweetsSignal all;
  all.values.assign(signals.begin()->second.values.size(), 0);
  for (const auto& [id, sig] : signals) {
    if (sig.values.size() != all.values.size())
      throw DimensionError("signal length mismatch in AllTweets aggregation");
    for (std::size_t t = 0; t < all.values.size(); ++t) all.values[t] += sig.values[t];
  }
  return all;
}

std::vector<double> to_real(std::span<const std::int64_t> values) {
  return {values.begin(), values.end()};
}

double l2_norm(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double xcorr0(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("xcorr0: series lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double ccm(std::span<const double> a, std::span<const double> b) {
  const double dot = xcorr0(a, b);
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;  // degenerate: no correlation evidence
  return dot / (na * nb);
}

double ccm(const ConceptSignal& a, const ConceptSignal& b) {
  const auto da = to_real(a.values);
  const auto db = to_real(b.values);
  return ccm(std::span<const double>(da), std::span<const double>(db));
}

double ccm(const ConceptSignal& a, const AllTweetsSignal& alltweets) {
  const auto da = to_real(a.values);
  const auto db = to_real(alltweets.values);
  return ccm(std::span<const double>(da), std::span<const double>(db));
}

void dump_signals_csv(const SignalMap& signals, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& [id, sig] : signals) {
    out << '"';
    for (char c : id) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
    for (auto v : sig.values) out << ',' << v;
    out << '\n';
  }
}

}  // namespace ttc
