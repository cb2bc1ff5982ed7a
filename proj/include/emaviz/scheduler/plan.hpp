#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "absl/time/civil_time.h"
#include "emaviz/core/time.hpp"

namespace emaviz::scheduler {

enum class Condition { ema_only, ema_plus_viz, washout };
enum class Order { ab, ba };

std::string_view to_string(Condition c);
std::string_view to_string(Order o);
Condition parse_condition(std::string_view s);
Order parse_order(std::string_view s);

struct ConditionWeek {
  Condition kind = Condition::ema_only;
  Date week_start;
  friend bool operator==(const ConditionWeek&, const ConditionWeek&) = default;
};

/// A-B crossover: two active weeks around a washout week.
struct StudyPlan {
  std::string participant;
  Order order = Order::ab;
  std::array<ConditionWeek, 3> weeks;
  std::string timezone = "UTC";

  Date first_day() const { return weeks[0].week_start; }
  Date last_day() const { return weeks[2].week_start + 6; }
  /// Condition week covering `d`, or nullopt outside the study.
  std::optional<ConditionWeek> week_of(Date d) const;
  bool is_active_day(Date d) const;

  friend bool operator==(const StudyPlan&, const StudyPlan&) = default;
};

/// Throws std::invalid_argument on a broken plan (order/weeks mismatch, gaps, bad zone).
void check_plan(const StudyPlan& plan);

/// "P001" for index 0, "P002" for index 1, ...
std::string participant_code(int participant_index);

/// Even indices get AB (EMA-only first), odd indices BA. Throws std::invalid_argument
/// if `start` is not a `week_start_day` or the zone is unknown.
StudyPlan make_study_plan(int participant_index, Date start, const std::string& timezone,
                          absl::Weekday week_start_day = absl::Weekday::monday,
                          std::optional<std::string> participant = std::nullopt);

absl::Weekday parse_weekday(std::string_view s);
std::string_view to_string(absl::Weekday d);

void to_json(nlohmann::json& j, const StudyPlan& p);
void from_json(const nlohmann::json& j, StudyPlan& p);

}  // namespace emaviz::scheduler
