#include "emaviz/datastore/events.hpp"

#include <stdexcept>

#include "emaviz/ema/json.hpp"

namespace emaviz::datastore {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::response_submitted: return "response-submitted";
    case EventKind::dashboard_viewed: return "dashboard-viewed";
    case EventKind::survey_opened: return "survey-opened";
    case EventKind::reminder_sent: return "reminder-sent";
    case EventKind::login_failed: return "login-failed";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view s) {
  for (auto k : kEventKinds)
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const EventRecord& e) {
  j = nlohmann::json{{"participant", e.participant},
                     {"at", e.at},
                     {"kind", to_string(e.kind)},
                     {"detail", e.detail}};
}

void from_json(const nlohmann::json& j, EventRecord& e) {
  e.participant = j.at("participant").get<std::string>();
  e.at = j.at("at").get<Timestamp>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.detail = j.value("detail", std::string());
}

}  // namespace emaviz::datastore
