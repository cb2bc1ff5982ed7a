#pragma once

#include <array>
#include <optional>
#include <string>

#include "emaviz/ema/measures.hpp"
#include "emaviz/ema/week.hpp"
#include "emaviz/renderer/theme.hpp"

namespace emaviz::renderer {

struct Span {
  double left = 0, right = 0;
  double center() const { return (left + right) / 2; }
  bool contains(double x0, double x1) const { return x0 >= left - 1e-9 && x1 <= right + 1e-9; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct DayColumn {
  Date date;
  Span bounds;
  double center = 0;
  /// Alternating stripes; day 0 is grey.
  bool grey = false;
  /// Morning, afternoon, evening.
  std::array<Span, 3> slots;
  friend bool operator==(const DayColumn&, const DayColumn&) = default;
};

/// The shared time axis: seven day columns with three sub-slots each.
struct LayoutGrid {
  double canvas_width = 0;
  double plot_left = 0;
  double plot_right = 0;
  std::array<DayColumn, 7> days;

  const Span& slot(int day, ema::SurveyWindow w) const {
    return days[static_cast<std::size_t>(day)].slots[static_cast<std::size_t>(ema::index_of(w))];
  }
  /// Column index of a date, or nullopt outside the week.
  std::optional<int> day_of(Date d) const;
  friend bool operator==(const LayoutGrid&, const LayoutGrid&) = default;
};

LayoutGrid layout_grid(const ema::WeekDataset& week, const Theme& theme);

/// A sleep bar on the noon-to-noon axis: 0 is noon of the previous day, 1 is noon of
/// the record day. Wake time is taken on the record day and bedtime is the duration
/// before it, so bars crossing either noon are cut to the axis and flagged.
struct SleepBar {
  double start = 0;
  double end = 0;
  bool clipped_start = false;
  bool clipped_end = false;
  /// Record-day column, nullopt if the date is outside the grid's week.
  std::optional<int> day;
  Span x;
  /// "8h", "7h45".
  std::string label;
  /// Quality level as saturation step, nullopt when quality was not given.
  std::optional<int> saturation_step;
};

SleepBar sleep_bar_geometry(const ema::SleepRecord& rec, const LayoutGrid& grid, const Theme& theme);

std::string duration_label(int minutes);

}  // namespace emaviz::renderer
