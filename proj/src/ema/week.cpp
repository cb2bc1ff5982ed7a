#include "emaviz/ema/week.hpp"

#include <stdexcept>

namespace emaviz::ema {

WindowTimes::WindowTimes()
    : WindowTimes({WindowSpan{ClockTime::hm(7, 0), ClockTime::hm(12, 0)},
                   WindowSpan{ClockTime::hm(12, 0), ClockTime::hm(17, 0)},
                   WindowSpan{ClockTime::hm(17, 0), ClockTime::hm(22, 0)}}) {}

WindowTimes::WindowTimes(std::array<WindowSpan, 3> spans) : spans_(spans) {
  for (int i = 0; i < 3; ++i) {
    if (!(spans_[i].open < spans_[i].close))
      throw std::invalid_argument("window " + std::to_string(i) + " must open before it closes");
    if (i > 0 && spans_[i].open < spans_[i - 1].close)
      throw std::invalid_argument("windows must be ordered and non-overlapping");
  }
}

WeekDataset::WeekDataset(std::string participant, Date week_start)
    : participant_(std::move(participant)), week_start_(week_start) {
  for (auto& day : slots_) day.fill(Pending{});
}

const SlotStatus& WeekDataset::at(int day, SurveyWindow w) const {
  return slots_.at(static_cast<std::size_t>(day))[index_of(w)];
}

void WeekDataset::set(int day, SurveyWindow w, SlotStatus status) {
  if (const auto* c = std::get_if<Completed>(&status)) {
    if (c->response.date != date_of(day) || c->response.window != w)
      throw std::invalid_argument("completed response does not match its slot");
    if (c->response.participant != participant_)
      throw std::invalid_argument("completed response belongs to another participant");
  }
  slots_.at(static_cast<std::size_t>(day))[index_of(w)] = std::move(status);
}

const EmaResponse* WeekDataset::response(int day, SurveyWindow w) const {
  const auto* c = std::get_if<Completed>(&at(day, w));
  return c ? &c->response : nullptr;
}

SlotCounts WeekDataset::counts() const {
  SlotCounts n;
  for (const auto& day : slots_) {
    for (const auto& s : day) {
      if (std::holds_alternative<Completed>(s)) ++n.completed;
      else if (std::holds_alternative<Missed>(s)) ++n.missed;
      else ++n.pending;
    }
  }
  return n;
}

WeekDataset build_week_dataset(std::span<const EmaResponse> responses, Date week_start,
                               absl::Time now, const SlotCalendar& calendar) {
  const std::string participant = responses.empty() ? std::string() : responses.front().participant;
  return build_week_dataset(participant, responses, week_start, now, calendar);
}

WeekDataset build_week_dataset(const std::string& participant,
                               std::span<const EmaResponse> responses, Date week_start,
                               absl::Time now, const SlotCalendar& calendar) {
  for (const auto& r : responses) {
    if (r.participant != participant)
      throw std::invalid_argument("responses from multiple participants: '" + participant +
                                  "' and '" + r.participant + "'");
  }

  std::array<std::array<const EmaResponse*, 3>, kDaysPerWeek> latest{};
  for (const auto& r : responses) {
    const auto day = r.date - week_start;
    if (day < 0 || day >= kDaysPerWeek) continue;
    auto& slot = latest[static_cast<std::size_t>(day)][index_of(r.window)];
    // Ties on revision fall back to the later submission, then to the larger payload
    // ordering, so the result never depends on input order.
    if (!slot || r.revision > slot->revision ||
        (r.revision == slot->revision &&
         (slot->submitted_at < r.submitted_at ||
          (!(r.submitted_at < slot->submitted_at) && slot->answers < r.answers)))) {
      slot = &r;
    }
  }

  WeekDataset week(participant, week_start);
  for (int d = 0; d < kDaysPerWeek; ++d) {
    for (auto w : kWindows) {
      if (const auto* r = latest[static_cast<std::size_t>(d)][index_of(w)]) {
        week.set(d, w, Completed{*r});
      } else if (now >= calendar.closes_at(week.date_of(d), w)) {
        week.set(d, w, Missed{});
      } else {
        week.set(d, w, Pending{});
      }
    }
  }
  return week;
}

}  // namespace emaviz::ema
