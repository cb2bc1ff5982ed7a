#include "emaviz/core/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace emaviz {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ClockTime::ClockTime(int minutes) : minutes_(minutes) {
  if (minutes < 0 || minutes >= kMinutesPerDay) {
    throw std::invalid_argument("clock time out of range: " + std::to_string(minutes));
  }
}

ClockTime ClockTime::hm(int hour, int minute) {
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
    throw std::invalid_argument("invalid clock time " + std::to_string(hour) + ":" +
                                std::to_string(minute));
  }
  return ClockTime(hour * 60 + minute);
}

ClockTime ClockTime::wrap(long long minutes) {
  long long m = minutes % kMinutesPerDay;
  if (m < 0) m += kMinutesPerDay;
  return ClockTime(static_cast<int>(m));
}

ClockTime ClockTime::parse(std::string_view text) {
  if (text.size() != 5 || text[2] != ':') {
    throw std::invalid_argument("clock time must be HH:MM, got '" + std::string(text) + "'");
  }
  return hm(parse_int(text.substr(0, 2), "hour"), parse_int(text.substr(3, 2), "minute"));
}

std::string ClockTime::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", hour(), minute());
  return buf;
}

int minutes_between(ClockTime from, ClockTime to) {
  return ClockTime::wrap(static_cast<long long>(to.minutes()) - from.minutes()).minutes();
}

Timestamp Timestamp::in_zone(absl::Time t, const absl::TimeZone& zone) {
  return Timestamp{t, zone.At(t).offset / 60};
}

Timestamp Timestamp::parse(std::string_view text) {
  std::string s(text);
  absl::Time t;
  std::string err;
  if (!absl::ParseTime(absl::RFC3339_full, s, &t, &err)) {
    throw std::invalid_argument("invalid timestamp '" + s + "': " + err);
  }
  int offset = 0;
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) {
    offset = 0;
  } else if (s.size() >= 6 && (s[s.size() - 6] == '+' || s[s.size() - 6] == '-') &&
             s[s.size() - 3] == ':') {
    const int sign = s[s.size() - 6] == '-' ? -1 : 1;
    offset = sign * (parse_int(std::string_view(s).substr(s.size() - 5, 2), "offset hour") * 60 +
                     parse_int(std::string_view(s).substr(s.size() - 2, 2), "offset minute"));
  } else {
    throw std::invalid_argument("timestamp lacks an explicit UTC offset: '" + s + "'");
  }
  return Timestamp{t, offset};
}

std::string Timestamp::str() const {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%E*S%Ez", instant,
                          absl::FixedTimeZone(utc_offset_minutes * 60));
}

std::string format_date(Date d) { return absl::FormatCivilTime(d); }

Date parse_date(std::string_view text) {
  Date d;
  if (text.size() != 10 || !absl::ParseCivilTime(absl::string_view(text.data(), text.size()), &d)) {
    throw std::invalid_argument("date must be YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return d;
}

absl::TimeZone load_zone(const std::string& name) {
  absl::TimeZone zone;
  if (!absl::LoadTimeZone(name, &zone)) {
    throw std::invalid_argument("unknown time zone '" + name + "'");
  }
  return zone;
}

Date local_date(absl::Time t, const absl::TimeZone& zone) { return Date(zone.At(t).cs); }

ClockTime local_clock(absl::Time t, const absl::TimeZone& zone) {
  const auto cs = zone.At(t).cs;
  return ClockTime::hm(cs.hour(), cs.minute());
}

absl::Time at_local(Date d, ClockTime t, const absl::TimeZone& zone) {
  return absl::FromCivil(absl::CivilMinute(d.year(), d.month(), d.day(), t.hour(), t.minute()),
                         zone);
}

}  // namespace emaviz
