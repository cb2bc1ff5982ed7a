#include "emaviz/scheduler/compliance.hpp"

#include <stdexcept>

namespace emaviz::scheduler {

double compliance_rate(const ema::WeekDataset& week) {
  const auto n = week.counts();
  if (n.completed + n.missed == 0) return 1.0;
  return static_cast<double>(n.completed) / (n.completed + n.missed);
}

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::full: return "full";
    case Profile::minimal_completer: return "minimal-completer";
    case Profile::binger: return "binger";
    case Profile::sparse: return "sparse";
  }
  return "?";
}

Profile classify_profile(const ema::WeekDataset& week, const ProfileThresholds& t) {
  // Slots in chronological order: day-major, then window.
  std::array<int, ema::kSlotsPerWeek> done{};
  std::array<int, ema::kDaysPerWeek> per_day{};
  int total = 0;
  for (int d = 0; d < ema::kDaysPerWeek; ++d) {
    for (auto w : ema::kWindows) {
      const auto& s = week.at(d, w);
      if (std::holds_alternative<ema::Pending>(s))
        throw std::invalid_argument("cannot classify a week that has not fully elapsed");
      const bool c = std::holds_alternative<ema::Completed>(s);
      done[static_cast<std::size_t>(d * 3 + ema::index_of(w))] = c;
      per_day[static_cast<std::size_t>(d)] += c;
      total += c;
    }
  }
  if (total == ema::kSlotsPerWeek) return Profile::full;

  if (total > 0) {
    int front = 0;
    for (int i = 0; 2 * i < ema::kSlotsPerWeek; ++i) front += done[static_cast<std::size_t>(i)];
    bool silent_tail = true;
    for (int i = ema::kSlotsPerWeek - t.binger_silent_tail; i < ema::kSlotsPerWeek; ++i)
      silent_tail = silent_tail && !done[static_cast<std::size_t>(i)];
    if (silent_tail && front >= t.binger_front_share * total) return Profile::binger;
  }

  bool minimal = true;
  for (int c : per_day) minimal = minimal && c >= 1 && c <= t.minimal_max_per_day;
  if (minimal) return Profile::minimal_completer;
  return Profile::sparse;
}

}  // namespace emaviz::scheduler
