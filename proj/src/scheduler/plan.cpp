#include "emaviz/scheduler/plan.hpp"

#include <cstdio>
#include <stdexcept>

#include "emaviz/ema/json.hpp"

namespace emaviz::scheduler {

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::ema_only: return "ema-only";
    case Condition::ema_plus_viz: return "ema-plus-viz";
    case Condition::washout: return "washout";
  }
  return "?";
}

std::string_view to_string(Order o) { return o == Order::ab ? "AB" : "BA"; }

Condition parse_condition(std::string_view s) {
  for (auto c : {Condition::ema_only, Condition::ema_plus_viz, Condition::washout})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown condition '" + std::string(s) + "'");
}

Order parse_order(std::string_view s) {
  if (s == "AB") return Order::ab;
  if (s == "BA") return Order::ba;
  throw std::invalid_argument("unknown order '" + std::string(s) + "'");
}

std::optional<ConditionWeek> StudyPlan::week_of(Date d) const {
  for (const auto& w : weeks) {
    const auto offset = d - w.week_start;
    if (offset >= 0 && offset < 7) return w;
  }
  return std::nullopt;
}

bool StudyPlan::is_active_day(Date d) const {
  const auto w = week_of(d);
  return w && w->kind != Condition::washout;
}

void check_plan(const StudyPlan& plan) {
  if (plan.participant.empty()) throw std::invalid_argument("plan without participant");
  const auto first = plan.order == Order::ab ? Condition::ema_only : Condition::ema_plus_viz;
  const auto last = plan.order == Order::ab ? Condition::ema_plus_viz : Condition::ema_only;
  if (plan.weeks[0].kind != first || plan.weeks[1].kind != Condition::washout ||
      plan.weeks[2].kind != last)
    throw std::invalid_argument("plan weeks do not follow order " + std::string(to_string(plan.order)));
  for (int i = 1; i < 3; ++i) {
    if (plan.weeks[i].week_start != plan.weeks[i - 1].week_start + 7)
      throw std::invalid_argument("plan weeks are not consecutive");
  }
  load_zone(plan.timezone);
}

std::string participant_code(int participant_index) {
  if (participant_index < 0) throw std::invalid_argument("negative participant index");
  char buf[16];
  std::snprintf(buf, sizeof buf, "P%03d", participant_index + 1);
  return buf;
}

StudyPlan make_study_plan(int participant_index, Date start, const std::string& timezone,
                          absl::Weekday week_start_day, std::optional<std::string> participant) {
  if (absl::GetWeekday(start) != week_start_day) {
    throw std::invalid_argument("start date " + format_date(start) + " is not a " +
                                std::string(to_string(week_start_day)));
  }
  StudyPlan plan;
  plan.participant = participant ? *participant : participant_code(participant_index);
  plan.order = participant_index % 2 == 0 ? Order::ab : Order::ba;
  const auto first = plan.order == Order::ab ? Condition::ema_only : Condition::ema_plus_viz;
  const auto last = plan.order == Order::ab ? Condition::ema_plus_viz : Condition::ema_only;
  plan.weeks = {ConditionWeek{first, start}, ConditionWeek{Condition::washout, start + 7},
                ConditionWeek{last, start + 14}};
  plan.timezone = timezone;
  check_plan(plan);
  return plan;
}

namespace {
constexpr std::array<std::pair<absl::Weekday, std::string_view>, 7> kWeekdays = {{
    {absl::Weekday::monday, "monday"},
    {absl::Weekday::tuesday, "tuesday"},
    {absl::Weekday::wednesday, "wednesday"},
    {absl::Weekday::thursday, "thursday"},
    {absl::Weekday::friday, "friday"},
    {absl::Weekday::saturday, "saturday"},
    {absl::Weekday::sunday, "sunday"},
}};
}  // namespace

absl::Weekday parse_weekday(std::string_view s) {
  for (const auto& [d, name] : kWeekdays)
    if (name == s) return d;
  throw std::invalid_argument("unknown weekday '" + std::string(s) + "'");
}

std::string_view to_string(absl::Weekday d) {
  for (const auto& [day, name] : kWeekdays)
    if (day == d) return name;
  return "?";
}

void to_json(nlohmann::json& j, const StudyPlan& p) {
  auto weeks = nlohmann::json::array();
  for (const auto& w : p.weeks) {
    weeks.push_back({{"kind", to_string(w.kind)}, {"week_start", w.week_start}});
  }
  j = nlohmann::json{{"participant", p.participant},
                     {"order", to_string(p.order)},
                     {"weeks", std::move(weeks)},
                     {"timezone", p.timezone}};
}

void from_json(const nlohmann::json& j, StudyPlan& p) {
  p.participant = j.at("participant").get<std::string>();
  p.order = parse_order(j.at("order").get<std::string>());
  const auto& weeks = j.at("weeks");
  if (!weeks.is_array() || weeks.size() != 3)
    throw std::invalid_argument("a study plan has exactly three weeks");
  for (std::size_t i = 0; i < 3; ++i) {
    p.weeks[i] = ConditionWeek{parse_condition(weeks[i].at("kind").get<std::string>()),
                               weeks[i].at("week_start").get<Date>()};
  }
  p.timezone = j.value("timezone", std::string("UTC"));
  check_plan(p);
}

}  // namespace emaviz::scheduler
