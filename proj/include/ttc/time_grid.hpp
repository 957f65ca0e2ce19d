#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ttc/errors.hpp"

namespace ttc {

enum class Interval { hourly, daily };

constexpr std::int64_t seconds_per(Interval iv) {
  return iv == Interval::hourly ? 3600 : 86400;
}

std::string to_string(Interval iv);
Interval interval_from_string(const std::string& s);  // throws ConfigError

// Discrete time grid of `length` half-open buckets of `interval` seconds,
// aligned to `start` (epoch seconds, UTC).
struct TimeGrid {
  std::int64_t start = 0;
  std::int64_t interval = 3600;
  std::size_t length = 0;

  static TimeGrid over(std::int64_t start, std::int64_t end_exclusive, std::int64_t interval) {
    if (interval <= 0) throw ConfigError("grid interval must be positive");
    if (end_exclusive <= start) throw ConfigError("grid period is empty");
    const std::int64_t span = end_exclusive - start;
    const auto length = static_cast<std::size_t>((span + interval - 1) / interval);
    TimeGrid g{start, interval, length};
    g.validate();
    return g;
  }

  void validate() const {
    if (interval <= 0) throw ConfigError("grid interval must be positive");
    if (length < 2) throw ConfigError("grid must have at least 2 intervals");
  }

  std::int64_t end() const {
    return start + interval * static_cast<std::int64_t>(length);
  }

  // A timestamp exactly on a boundary belongs to the later interval.
  std::optional<std::size_t> bucket(std::int64_t t) const {
    if (t < start || t >= end()) return std::nullopt;
    return static_cast<std::size_t>((t - start) / interval);
  }
};

// Accepts raw epoch seconds, YYYY-MM-DD, or YYYY-MM-DDTHH:MM:SS (UTC).
std::int64_t parse_time_utc(const std::string& text);

// Floor to 00:00 UTC of the day containing t.
std::int64_t floor_to_utc_midnight(std::int64_t t);

}  // namespace ttc
