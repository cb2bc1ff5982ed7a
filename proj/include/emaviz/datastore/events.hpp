#pragma once

#include <array>
#include <string>
#include <string_view>

#include <json.hpp>

#include "emaviz/core/time.hpp"

namespace emaviz::datastore {

enum class EventKind {
  response_submitted,
  dashboard_viewed,
  survey_opened,
  reminder_sent,
  login_failed,
};

inline constexpr std::array kEventKinds = {
    EventKind::response_submitted, EventKind::dashboard_viewed, EventKind::survey_opened,
    EventKind::reminder_sent, EventKind::login_failed};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);

/// One interaction in the audit log. `participant` may be an unrecognised code for
/// LoginFailed.
struct EventRecord {
  std::string participant;
  Timestamp at;
  EventKind kind = EventKind::survey_opened;
  std::string detail;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

void to_json(nlohmann::json& j, const EventRecord& e);
void from_json(const nlohmann::json& j, EventRecord& e);

}  // namespace emaviz::datastore
