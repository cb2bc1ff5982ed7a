#include "emaviz/scheduler/reminders.hpp"

#include <algorithm>
#include <stdexcept>

#include "emaviz/ema/json.hpp"

namespace emaviz::scheduler {

std::string_view to_string(Channel c) { return c == Channel::text ? "text" : "email"; }
std::string_view to_string(ReminderKind k) { return k == ReminderKind::open ? "open" : "nudge"; }

Channel parse_channel(std::string_view s) {
  if (s == "text") return Channel::text;
  if (s == "email") return Channel::email;
  throw std::invalid_argument("unknown channel '" + std::string(s) + "'");
}

void check_policy(const ReminderPolicy& policy) {
  if (policy.channels.empty()) throw std::invalid_argument("reminder policy needs a channel");
  auto channels = policy.channels;
  std::sort(channels.begin(), channels.end());
  if (std::adjacent_find(channels.begin(), channels.end()) != channels.end())
    throw std::invalid_argument("duplicate reminder channel");
  for (int o : policy.nudge_offsets_minutes)
    if (o <= 0) throw std::invalid_argument("nudge offsets must be positive");
}

bool ReminderEvent::same_occasion(const ReminderEvent& other) const {
  return participant == other.participant && date == other.date && window == other.window &&
         channel == other.channel && kind == other.kind && offset_minutes == other.offset_minutes;
}

std::vector<ReminderEvent> due_reminders(const StudyPlan& plan, const ReminderPolicy& policy,
                                         std::span<const ema::EmaResponse> responses,
                                         absl::Time now, std::span<const ReminderEvent> emitted) {
  const auto zone = load_zone(plan.timezone);
  const Date today = local_date(now, zone);
  std::vector<ReminderEvent> out;
  if (!plan.is_active_day(today)) return out;

  for (auto w : ema::kWindows) {
    const auto open = at_local(today, policy.windows[w].open, zone);
    const auto close = at_local(today, policy.windows[w].close, zone);
    if (now < open || now >= close) continue;
    const bool completed = std::any_of(responses.begin(), responses.end(), [&](const auto& r) {
      return r.participant == plan.participant && r.date == today && r.window == w;
    });
    if (completed) continue;

    std::vector<std::pair<ReminderKind, int>> occasions{{ReminderKind::open, 0}};
    for (int o : policy.nudge_offsets_minutes) occasions.emplace_back(ReminderKind::nudge, o);
    for (const auto& [kind, offset] : occasions) {
      const auto due = open + absl::Minutes(offset);
      if (due >= close || due > now) continue;
      for (auto channel : policy.channels) {
        ReminderEvent e{plan.participant, today, w, channel, kind, offset,
                        Timestamp::in_zone(due, zone)};
        const bool sent = std::any_of(emitted.begin(), emitted.end(),
                                      [&](const auto& prior) { return prior.same_occasion(e); });
        if (!sent) out.push_back(std::move(e));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.due_at < b.due_at; });
  return out;
}

void StreamNotifier::deliver(const ReminderEvent& event) {
  out_ << nlohmann::json(event).dump() << '\n';
  out_.flush();
}

void to_json(nlohmann::json& j, const ReminderPolicy& p) {
  auto channels = nlohmann::json::array();
  for (auto c : p.channels) channels.push_back(to_string(c));
  j = nlohmann::json{{"windows", p.windows},
                     {"nudge_offsets_minutes", p.nudge_offsets_minutes},
                     {"channels", std::move(channels)}};
}

void from_json(const nlohmann::json& j, ReminderPolicy& p) {
  p = ReminderPolicy{};
  if (j.contains("windows")) p.windows = j.at("windows").get<ema::WindowTimes>();
  if (j.contains("nudge_offsets_minutes"))
    p.nudge_offsets_minutes = j.at("nudge_offsets_minutes").get<std::vector<int>>();
  if (j.contains("channels")) {
    p.channels.clear();
    for (const auto& c : j.at("channels")) p.channels.push_back(parse_channel(c.get<std::string>()));
  }
  check_policy(p);
}

void to_json(nlohmann::json& j, const ReminderEvent& e) {
  j = nlohmann::json{{"participant", e.participant}, {"date", e.date},
                     {"window", e.window},           {"channel", to_string(e.channel)},
                     {"kind", to_string(e.kind)},    {"offset_minutes", e.offset_minutes},
                     {"due_at", e.due_at}};
}

void from_json(const nlohmann::json& j, ReminderEvent& e) {
  e.participant = j.at("participant").get<std::string>();
  e.date = j.at("date").get<Date>();
  e.window = j.at("window").get<ema::SurveyWindow>();
  e.channel = parse_channel(j.at("channel").get<std::string>());
  e.kind = j.at("kind").get<std::string>() == "open" ? ReminderKind::open : ReminderKind::nudge;
  e.offset_minutes = j.at("offset_minutes").get<int>();
  e.due_at = j.at("due_at").get<Timestamp>();
}

}  // namespace emaviz::scheduler
