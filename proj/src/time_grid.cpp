#include "ttc/time_grid.hpp"

#include <cctype>
#include <chrono>

namespace ttc {

std::string to_string(Interval iv) { return iv == Interval::hourly ? "hourly" : "daily"; }

Interval interval_from_string(const std::string& s) {
  if (s == "hourly") return Interval::hourly;
  if (s == "daily") return Interval::daily;
  throw ConfigError("unknown interval '" + s + "' (expected hourly or daily)");
}

namespace {

std::int64_t civil_to_epoch(int year, unsigned month, unsigned day, int hh, int mm, int ss) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) throw ConfigError("invalid calendar date");
  const sys_days d{ymd};
  return duration_cast<seconds>(d.time_since_epoch()).count() + hh * 3600 + mm * 60 + ss;
}

}  // namespace

std::int64_t parse_time_utc(const std::string& text) {
  if (text.empty()) throw ConfigError("empty time value");
  bool digits_only = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (i == 0 && (c == '-' || c == '+')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      digits_only = false;
      break;
    }
  }
  if (digits_only) return std::stoll(text);

  int year = 0, hh = 0, mm = 0, ss = 0;
  unsigned month = 0, day = 0;
  char sep = 0;
  const int n_date = std::sscanf(text.c_str(), "%d-%u-%u%c%d:%d:%d", &year, &month, &day, &sep,
                                 &hh, &mm, &ss);
  if (n_date == 3) return civil_to_epoch(year, month, day, 0, 0, 0);
  if (n_date == 7 && (sep == 'T' || sep == ' '))
    return civil_to_epoch(year, month, day, hh, mm, ss);
  throw ConfigError("cannot parse time '" + text + "' (use epoch seconds or YYYY-MM-DD[THH:MM:SS])");
}

std::int64_t floor_to_utc_midnight(std::int64_t t) {
  const std::int64_t day = 86400;
  std::int64_t d = t / day;
  if (t < 0 && t % day != 0) --d;
  return d * day;
}

}  // namespace ttc
