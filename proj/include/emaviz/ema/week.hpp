#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>

#include "absl/time/time.h"
#include "emaviz/core/time.hpp"
#include "emaviz/ema/response.hpp"

namespace emaviz::ema {

inline constexpr int kDaysPerWeek = 7;
inline constexpr int kSlotsPerWeek = kDaysPerWeek * 3;

struct WindowSpan {
  ClockTime open;
  ClockTime close;
  friend bool operator==(const WindowSpan&, const WindowSpan&) = default;
};

/// Local open/close clock times of the three daily windows.
class WindowTimes {
 public:
  /// Morning 07:00-12:00, afternoon 12:00-17:00, evening 17:00-22:00.
  WindowTimes();
  /// Throws std::invalid_argument unless open < close and windows are ordered, non-overlapping.
  explicit WindowTimes(std::array<WindowSpan, 3> spans);

  const WindowSpan& operator[](SurveyWindow w) const { return spans_[index_of(w)]; }
  const std::array<WindowSpan, 3>& spans() const { return spans_; }

  friend bool operator==(const WindowTimes&, const WindowTimes&) = default;

 private:
  std::array<WindowSpan, 3> spans_;
};

/// Maps slots onto instants in the participant's home zone.
struct SlotCalendar {
  WindowTimes windows;
  absl::TimeZone zone = absl::UTCTimeZone();

  absl::Time opens_at(Date d, SurveyWindow w) const { return at_local(d, windows[w].open, zone); }
  absl::Time closes_at(Date d, SurveyWindow w) const {
    return at_local(d, windows[w].close, zone);
  }
};

struct Completed {
  EmaResponse response;
  friend bool operator==(const Completed&, const Completed&) = default;
};
struct Missed {
  friend bool operator==(const Missed&, const Missed&) = default;
};
struct Pending {
  friend bool operator==(const Pending&, const Pending&) = default;
};

using SlotStatus = std::variant<Completed, Missed, Pending>;

struct SlotCounts {
  int completed = 0;
  int missed = 0;
  int pending = 0;
  friend bool operator==(const SlotCounts&, const SlotCounts&) = default;
};

/// One participant-week: a 7 x 3 grid of slot statuses.
class WeekDataset {
 public:
  WeekDataset(std::string participant, Date week_start);

  const std::string& participant() const { return participant_; }
  Date week_start() const { return week_start_; }
  Date date_of(int day) const { return week_start_ + day; }

  const SlotStatus& at(int day, SurveyWindow w) const;
  /// Throws std::invalid_argument if a completed response does not belong to the slot.
  void set(int day, SurveyWindow w, SlotStatus status);

  /// Response of a completed slot, else nullptr.
  const EmaResponse* response(int day, SurveyWindow w) const;

  SlotCounts counts() const;

  friend bool operator==(const WeekDataset&, const WeekDataset&) = default;

 private:
  std::string participant_;
  Date week_start_;
  std::array<std::array<SlotStatus, 3>, kDaysPerWeek> slots_;
};

/// Latest revision wins per slot; closed windows without a response are Missed,
/// windows not yet closed at `now` are Pending. Out-of-week responses are ignored.
/// Throws std::invalid_argument if responses belong to more than one participant.
WeekDataset build_week_dataset(std::span<const EmaResponse> responses, Date week_start,
                               absl::Time now, const SlotCalendar& calendar = {});

/// As above, for a named participant; every response must belong to it.
WeekDataset build_week_dataset(const std::string& participant,
                               std::span<const EmaResponse> responses, Date week_start,
                               absl::Time now, const SlotCalendar& calendar = {});

}  // namespace emaviz::ema
