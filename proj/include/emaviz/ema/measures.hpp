#pragma once

#include <optional>

#include "emaviz/core/time.hpp"
#include "emaviz/ema/response.hpp"

namespace emaviz::ema {

/// (wake - bed) mod 1440 in minutes. Throws std::invalid_argument when bed == wake,
/// since a zero or full-day sleep cannot be told apart.
int sleep_duration(ClockTime bed, ClockTime wake);

/// Maps a 1..5 Likert level to -2..+2. Throws std::out_of_range otherwise.
int likert_to_diverging(int level);

struct SleepRecord {
  Date date;
  ClockTime bed;
  ClockTime wake;
  /// 0..3 for poor, okay, good, great; absent when the quality item was skipped.
  std::optional<int> quality;
  int duration_minutes = 0;

  friend bool operator==(const SleepRecord&, const SleepRecord&) = default;
};

/// Night of sleep reported in a morning response; nullopt unless both clock
/// times are present and differ.
std::optional<SleepRecord> sleep_record(const EmaResponse& morning);

}  // namespace emaviz::ema
