#pragma once

#include <string_view>

#include "emaviz/ema/week.hpp"

namespace emaviz::scheduler {

/// Completed / (Completed + Missed). A week in which no window has closed and nothing
/// was submitted is vacuously compliant (1.0). The clock is already folded into the
/// week's Pending/Missed split.
double compliance_rate(const ema::WeekDataset& week);

enum class Profile { full, minimal_completer, binger, sparse };

std::string_view to_string(Profile p);

struct ProfileThresholds {
  /// Share of completions that must fall in the first half of the week's slots.
  double binger_front_share = 0.8;
  /// Number of trailing slots that must all be Missed.
  int binger_silent_tail = 7;
  /// Upper bound on completions per day for a minimal completer (lower bound is 1).
  int minimal_max_per_day = 2;
};

/// Checked in order Full, Binger, MinimalCompleter, else Sparse. Throws
/// std::invalid_argument if any slot is still Pending.
Profile classify_profile(const ema::WeekDataset& week, const ProfileThresholds& t = {});

}  // namespace emaviz::scheduler
