#include "ttc/filter.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>

#include "ttc/io_util.hpp"
#include "ttc/parallel.hpp"

namespace ttc {

void FilterConfig::validate() const {
  if (!(rho > 0.0) || !(rho <= 1.0)) throw ConfigError("rho must be in (0, 1]");
  if (psd_peak_z < 0.0) throw ConfigError("psd_peak_z must be >= 0 (0 = auto)");
  if (min_total_count < 0) throw ConfigError("min_total_count must be nonnegative");
}

double white_noise_peak_threshold(std::size_t bins, const FilterConfig& cfg) {
  if (cfg.psd_peak_z > 0.0) return cfg.psd_peak_z;
  if (bins < 2) return 0.0;
  const double alpha = 0.05;
  const double m = static_cast<double>(bins);
  const double tail = std::log(m / alpha) - 1.0;
  const double cap = 0.95 * std::sqrt(m - 1.0);  // structural max of a z-score over m samples
  return std::min(tail, cap);
}

namespace {

// FFTW plan creation is not thread-safe; execution is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::vector<double> power_spectrum(std::span<const double> signal) {
  const std::size_t n = signal.size();
  if (n < 2) throw ConfigError("power_spectrum needs a signal of length >= 2");

  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = signal[i] - mean;

  std::vector<double> out(n / 2 + 1, 0.0);
  {
    fftw_complex* spectrum;
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(fftw_plan_mutex());
      spectrum = fftw_alloc_complex(n / 2 + 1);
      plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), centered.data(), spectrum, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    for (std::size_t k = 0; k <= n / 2; ++k)
      out[k] = spectrum[k][0] * spectrum[k][0] + spectrum[k][1] * spectrum[k][1];
    {
      std::lock_guard<std::mutex> lock(fftw_plan_mutex());
      fftw_destroy_plan(plan);
      fftw_free(spectrum);
    }
  }
  out.erase(out.begin());  // DC bin excluded so volume does not mask flatness
  return out;
}

bool is_stop_concept(std::span<const double> signal, std::span<const double> alltweets,
                     double rho) {
  return ccm(signal, alltweets) > rho;
}

WhiteNoiseStats white_noise_stats(std::span<const double> signal, const FilterConfig& cfg) {
  WhiteNoiseStats stats;
  if (signal.size() < 8) {
    stats.short_series = true;  // too few bins to decide; retained
    return stats;
  }

  const double total = std::accumulate(signal.begin(), signal.end(), 0.0);
  if (cfg.min_total_count > 0 && total < static_cast<double>(cfg.min_total_count)) {
    stats.is_white = true;
    return stats;
  }

  // A lone burst has a mathematically flat spectrum; genuine one-burst events
  // are retained regardless of the spectral test.
  const double peak = signal.empty() ? 0.0 : *std::max_element(signal.begin(), signal.end());
  if (total > 0.0 && peak > 0.5 * total) {
    stats.burst_guard = true;
    return stats;
  }

  const auto spectrum = power_spectrum(signal);
  const std::size_t m = spectrum.size();
  const double mean = std::accumulate(spectrum.begin(), spectrum.end(), 0.0) / static_cast<double>(m);
  double var = 0.0;
  for (double v : spectrum) var += (v - mean) * (v - mean);
  var /= static_cast<double>(m);
  const double sd = std::sqrt(var);
  const double maxv = *std::max_element(spectrum.begin(), spectrum.end());

  if (maxv == 0.0 || sd == 0.0) {
    stats.is_white = true;  // flat spectrum: constant signal carries no event
    return stats;
  }
  stats.max_z = (maxv - mean) / sd;
  stats.is_white = maxv <= mean + white_noise_peak_threshold(m, cfg) * sd;
  return stats;
}

bool is_white_noise(std::span<const double> signal, const FilterConfig& cfg) {
  return white_noise_stats(signal, cfg).is_white;
}

std::string to_string(ConceptDecision d) {
  switch (d) {
    case ConceptDecision::stop: return "stop";
    case ConceptDecision::white_noise: return "white_noise";
    case ConceptDecision::kept: return "kept";
  }
  return "kept";
}

std::pair<SignalMap, FilterReport> apply_filters(const SignalMap& signals,
                                                 const AllTweetsSignal& alltweets,
                                                 const FilterConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<const ConceptSignal*> roster;
  roster.reserve(signals.size());
  for (const auto& [id, sig] : signals) roster.push_back(&sig);

  const auto all_real = to_real(alltweets.values);
  FilterReport report;
  report.rows.resize(roster.size());
  std::vector<char> short_flags(roster.size(), 0);

  parallel_chunks(0, roster.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const ConceptSignal& sig = *roster[i];
      const auto values = to_real(sig.values);
      ConceptReport row;
      row.concept_id = sig.concept_id;
      row.ccm_alltweets = ccm(std::span<const double>(values), std::span<const double>(all_real));
      if (row.ccm_alltweets > cfg.rho) {
        row.decision = ConceptDecision::stop;
      } else {
        const auto stats = white_noise_stats(std::span<const double>(values), cfg);
        row.spectrum_max_z = stats.max_z;
        row.decision = stats.is_white ? ConceptDecision::white_noise : ConceptDecision::kept;
        if (stats.short_series) short_flags[i] = 1;
      }
      report.rows[i] = std::move(row);
    }
  });

  SignalMap survivors;
  for (const auto& row : report.rows) {
    switch (row.decision) {
      case ConceptDecision::stop:
        ++report.stop_removed;
        break;
      case ConceptDecision::white_noise:
        ++report.white_noise_removed;
        break;
      case ConceptDecision::kept:
        ++report.survivors;
        survivors.insert(*signals.find(row.concept_id));
        break;
    }
  }
  report.short_series_retained =
      static_cast<std::size_t>(std::count(short_flags.begin(), short_flags.end(), 1));
  return {std::move(survivors), std::move(report)};
}

void write_filter_report_csv(const FilterReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "concept_id,decision,ccm_with_alltweets,spectrum_max_z\n";
  char buf[64];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, ",%s,%.9g,%.9g\n", to_string(row.decision).c_str(),
                  row.ccm_alltweets, row.spectrum_max_z);
    out << csv_escape(row.concept_id) << buf;
  }
}

}  // namespace ttc
