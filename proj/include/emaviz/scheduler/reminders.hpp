#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "emaviz/ema/response.hpp"
#include "emaviz/ema/week.hpp"
#include "emaviz/scheduler/plan.hpp"

namespace emaviz::scheduler {

enum class Channel { text, email };
enum class ReminderKind { open, nudge };

std::string_view to_string(Channel c);
std::string_view to_string(ReminderKind k);
Channel parse_channel(std::string_view s);

struct ReminderPolicy {
  ema::WindowTimes windows;
  /// Minutes after window open; each must land before the window closes to be used.
  std::vector<int> nudge_offsets_minutes{60};
  std::vector<Channel> channels{Channel::text};

  friend bool operator==(const ReminderPolicy&, const ReminderPolicy&) = default;
};

/// Throws std::invalid_argument without a channel, with duplicate channels, or with
/// non-positive offsets. Window ordering is enforced by WindowTimes itself.
void check_policy(const ReminderPolicy& policy);

struct ReminderEvent {
  std::string participant;
  Date date;
  ema::SurveyWindow window = ema::SurveyWindow::morning;
  Channel channel = Channel::text;
  ReminderKind kind = ReminderKind::open;
  int offset_minutes = 0;
  Timestamp due_at;

  /// Identity used for de-duplication against the emission log.
  bool same_occasion(const ReminderEvent& other) const;

  friend bool operator==(const ReminderEvent&, const ReminderEvent&) = default;
};

/// Reminders due at `now` that have not been emitted yet: the open reminder at window
/// open and nudges at the configured offsets, for active (non-washout) study days, only
/// while the window is open and the slot has no response. Ordered by due time.
std::vector<ReminderEvent> due_reminders(const StudyPlan& plan, const ReminderPolicy& policy,
                                         std::span<const ema::EmaResponse> responses,
                                         absl::Time now,
                                         std::span<const ReminderEvent> emitted = {});

/// Outbound delivery of reminder events. Carrier gateways live outside this project.
class Notifier {
 public:
  virtual ~Notifier() = default;
  virtual void deliver(const ReminderEvent& event) = 0;
};

/// Writes one JSON line per event to a stream (console or file).
class StreamNotifier final : public Notifier {
 public:
  explicit StreamNotifier(std::ostream& out) : out_(out) {}
  void deliver(const ReminderEvent& event) override;

 private:
  std::ostream& out_;
};

void to_json(nlohmann::json& j, const ReminderPolicy& p);
void from_json(const nlohmann::json& j, ReminderPolicy& p);
void to_json(nlohmann::json& j, const ReminderEvent& e);
void from_json(const nlohmann::json& j, ReminderEvent& e);

}  // namespace emaviz::scheduler
