#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ttc/ingest.hpp"

namespace ttc {

// Per-interval occurrence counts of one concept over the whole period.
struct ConceptSignal {
  std::string concept_id;
  std::vector<std::int64_t> values;

  std::int64_t total() const;
};

using SignalMap = std::map<std::string, ConceptSignal, std::less<>>;

// One signal per observed concept; values copied from the corpus index.
SignalMap build_concept_signals(const BucketedCorpus& corpus);

// Elementwise sum of every concept signal (computed over the unfiltered roster).
struct AllTweetsSignal {
  std::vector<std::int64_t> values;
};

AllTweetsSignal build_alltweets(const SignalMap& signals);  // DataError when empty

std::vector<double> to_real(std::span<const std::int64_t> values);
double l2_norm(std::span<const double> values);

// Lag-0 inner product of two equal-length series.
double xcorr0(std::span<const double> a, std::span<const double> b);

// Lag-0 cross-correlation normalized by the product of Euclidean norms;
// in [0,1] for nonnegative series. All-zero input yields 0 (no evidence).
double ccm(std::span<const double> a, std::span<const double> b);
double ccm(const ConceptSignal& a, const ConceptSignal& b);
double ccm(const ConceptSignal& a, const AllTweetsSignal& alltweets);

void dump_signals_csv(const SignalMap& signals, const std::string& path);

}  // namespace ttc
