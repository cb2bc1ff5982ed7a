#include "emaviz/datastore/forensics.hpp"

#include <algorithm>
#include <sstream>

#include "emaviz/ema/json.hpp"

namespace emaviz::datastore {

ForensicReport forensic_report(const LogStore& store, const std::string& participant,
                               Date week_start) {
  ForensicReport rep;
  rep.participant = participant;
  rep.week_start = week_start;
  for (auto k : kEventKinds) rep.counts[k] = 0;
  for (int d = 0; d < ema::kDaysPerWeek; ++d)
    rep.days[static_cast<std::size_t>(d)].date = week_start + d;

  const auto plan = store.plan(participant);
  const auto zone = load_zone(plan ? plan->timezone : "UTC");
  if (plan) {
    if (const auto w = plan->week_of(week_start); w && w->week_start == week_start)
      rep.condition = w->kind;
  }

  auto events = store.events(participant);
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.at < b.at; });
  for (auto& e : events) {
    const auto offset = local_date(e.at.instant, zone) - week_start;
    if (offset < 0 || offset >= ema::kDaysPerWeek) continue;
    ++rep.counts[e.kind];
    if (e.kind != EventKind::login_failed)
      rep.days[static_cast<std::size_t>(offset)].events.push_back(std::move(e));
  }
  rep.dashboard_never_viewed = rep.condition == scheduler::Condition::ema_plus_viz &&
                               rep.counts[EventKind::dashboard_viewed] == 0;
  return rep;
}

nlohmann::json to_json(const ForensicReport& report) {
  auto days = nlohmann::json::array();
  for (const auto& d : report.days) days.push_back({{"date", d.date}, {"events", d.events}});
  auto counts = nlohmann::json::object();
  for (const auto& [k, n] : report.counts) counts[std::string(to_string(k))] = n;
  return {{"participant", report.participant},
          {"week_start", report.week_start},
          {"condition", report.condition ? nlohmann::json(scheduler::to_string(*report.condition))
                                         : nlohmann::json(nullptr)},
          {"days", std::move(days)},
          {"counts", std::move(counts)},
          {"dashboard_never_viewed", report.dashboard_never_viewed}};
}

std::string format_report(const ForensicReport& report) {
  std::ostringstream out;
  out << "participant " << report.participant << ", week of " << format_date(report.week_start);
  if (report.condition) out << " (" << scheduler::to_string(*report.condition) << ")";
  out << '\n';
  for (const auto& d : report.days) {
    out << format_date(d.date) << '\n';
    for (const auto& e : d.events) {
      out << "  " << e.at.str() << "  " << to_string(e.kind);
      if (!e.detail.empty()) out << "  " << e.detail;
      out << '\n';
    }
  }
  for (const auto& [k, n] : report.counts) out << to_string(k) << ": " << n << '\n';
  if (report.dashboard_never_viewed) out << "FLAG: dashboard never viewed during visualisation week\n";
  return out.str();
}

}  // namespace emaviz::datastore
