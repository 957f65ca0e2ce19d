#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttc/signal.hpp"

namespace ttc {

struct FilterConfig {
  double rho = 0.9;          // stop-concept correlation threshold, in (0,1]
  double psd_peak_z = 0.0;   // 0 = auto (bin-count critical value); >0 = explicit
  std::int64_t min_total_count = 0;

  void validate() const;
};

// Peak threshold actually applied for a spectrum of `bins` bins: the explicit
// value when set, otherwise min(ln(bins/0.05) - 1, 0.95*sqrt(bins - 1)) — the
// largest z a white-noise periodogram max reaches only with probability ~5%,
// capped below the structural maximum of a z-score over `bins` samples.
double white_noise_peak_threshold(std::size_t bins, const FilterConfig& cfg);

// Squared DFT magnitudes of the mean-removed signal, bins 1..floor(L/2)
// (DC excluded). L must be >= 2.
std::vector<double> power_spectrum(std::span<const double> signal);

bool is_stop_concept(std::span<const double> signal, std::span<const double> alltweets,
                     double rho);

struct WhiteNoiseStats {
  bool is_white = false;
  double max_z = 0.0;        // 0 when the spectrum is degenerate
  bool burst_guard = false;  // single interval held > 50% of total count
  bool short_series = false; // L < 8: undecidable, retained
};

WhiteNoiseStats white_noise_stats(std::span<const double> signal, const FilterConfig& cfg);
bool is_white_noise(std::span<const double> signal, const FilterConfig& cfg);

enum class ConceptDecision { kept, stop, white_noise };

std::string to_string(ConceptDecision d);

struct ConceptReport {
  std::string concept_id;
  ConceptDecision decision = ConceptDecision::kept;
  double ccm_alltweets = 0.0;
  double spectrum_max_z = 0.0;
};

struct FilterReport {
  std::vector<ConceptReport> rows;  // one per input concept, roster order
  std::size_t stop_removed = 0;
  std::size_t white_noise_removed = 0;
  std::size_t survivors = 0;
  std::size_t short_series_retained = 0;
};

// Stop test first, then the white-noise test on what survives it.
std::pair<SignalMap, FilterReport> apply_filters(const SignalMap& signals,
                                                 const AllTweetsSignal& alltweets,
                                                 const FilterConfig& cfg,
                                                 unsigned threads = 0);

void write_filter_report_csv(const FilterReport& report, const std::string& path);

}  // namespace ttc
