#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emaviz/datastore/log_store.hpp"

namespace emaviz::datastore {

struct DayTimeline {
  Date date;
  /// Chronological; reminder, survey-opened, response and dashboard events only.
  std::vector<EventRecord> events;
};

struct ForensicReport {
  std::string participant;
  Date week_start;
  /// Condition of that week in the participant's plan, if any.
  std::optional<scheduler::Condition> condition;
  std::array<DayTimeline, ema::kDaysPerWeek> days;
  /// Every event of the week by kind, login failures included.
  std::map<EventKind, int> counts;
  /// Visualisation week in which the dashboard was never opened.
  bool dashboard_never_viewed = false;
};

/// Days are split in the plan's time zone (UTC without a plan).
ForensicReport forensic_report(const LogStore& store, const std::string& participant,
                               Date week_start);

nlohmann::json to_json(const ForensicReport& report);
/// Human-readable day-by-day listing.
std::string format_report(const ForensicReport& report);

}  // namespace emaviz::datastore
