#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "absl/time/civil_time.h"
#include "absl/time/time.h"

namespace emaviz {

/// Calendar date in the participant's local calendar.
using Date = absl::CivilDay;

/// Wall-clock time of day, minutes since local midnight in [0, 1440).
class ClockTime {
 public:
  static constexpr int kMinutesPerDay = 1440;

  constexpr ClockTime() = default;
  explicit ClockTime(int minutes);

  static ClockTime hm(int hour, int minute);
  /// Reduces any integer minute count modulo 1440.
  static ClockTime wrap(long long minutes);
  /// Accepts "HH:MM".
  static ClockTime parse(std::string_view text);

  constexpr int minutes() const { return minutes_; }
  constexpr int hour() const { return minutes_ / 60; }
  constexpr int minute() const { return minutes_ % 60; }
  std::string str() const;

  friend constexpr auto operator<=>(ClockTime, ClockTime) = default;

 private:
  int minutes_ = 0;
};

/// (to - from) mod 1440, in [0, 1440).
int minutes_between(ClockTime from, ClockTime to);

/// An instant together with the UTC offset it was recorded in.
struct Timestamp {
  absl::Time instant;
  int utc_offset_minutes = 0;

  static Timestamp in_zone(absl::Time t, const absl::TimeZone& zone);
  /// RFC 3339 with a mandatory offset ("Z" or "+hh:mm").
  static Timestamp parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

inline bool operator<(const Timestamp& a, const Timestamp& b) { return a.instant < b.instant; }

std::string format_date(Date d);
Date parse_date(std::string_view text);

/// Throws std::invalid_argument for names the zone database does not know.
absl::TimeZone load_zone(const std::string& name);

Date local_date(absl::Time t, const absl::TimeZone& zone);
ClockTime local_clock(absl::Time t, const absl::TimeZone& zone);
absl::Time at_local(Date d, ClockTime t, const absl::TimeZone& zone);

}  // namespace emaviz
