#include "emaviz/renderer/layout.hpp"

#include <algorithm>
#include <cstdio>

namespace emaviz::renderer {

std::optional<int> LayoutGrid::day_of(Date d) const {
  const auto offset = d - days[0].date;
  if (offset < 0 || offset >= 7) return std::nullopt;
  return static_cast<int>(offset);
}

LayoutGrid layout_grid(const ema::WeekDataset& week, const Theme& theme) {
  const auto& g = theme.geometry;
  LayoutGrid grid;
  grid.canvas_width = g.canvas_width();
  grid.plot_left = g.margin_left;
  grid.plot_right = g.margin_left + 7 * g.day_width;
  for (int d = 0; d < 7; ++d) {
    auto& col = grid.days[static_cast<std::size_t>(d)];
    col.date = week.date_of(d);
    col.bounds = {g.margin_left + d * g.day_width, g.margin_left + (d + 1) * g.day_width};
    col.center = g.margin_left + (d + 0.5) * g.day_width;
    col.grey = d % 2 == 0;
    const double first = col.center - 1.5 * g.sub_slot_width;
    for (int w = 0; w < 3; ++w) {
      col.slots[static_cast<std::size_t>(w)] = {first + w * g.sub_slot_width,
                                                first + (w + 1) * g.sub_slot_width};
    }
  }
  return grid;
}

std::string duration_label(int minutes) {
  char buf[32];
  if (minutes % 60 == 0) std::snprintf(buf, sizeof buf, "%dh", minutes / 60);
  else std::snprintf(buf, sizeof buf, "%dh%02d", minutes / 60, minutes % 60);
  return buf;
}

SleepBar sleep_bar_geometry(const ema::SleepRecord& rec, const LayoutGrid& grid, const Theme& theme) {
  constexpr double kNoon = 720, kAxis = 1440;
  const double wake = rec.wake.minutes();
  const double bed = wake - rec.duration_minutes;
  SleepBar bar;
  bar.clipped_start = bed < -kNoon;
  bar.clipped_end = wake > kNoon;
  bar.start = (std::clamp(bed, -kNoon, kNoon) + kNoon) / kAxis;
  bar.end = (std::clamp(wake, -kNoon, kNoon) + kNoon) / kAxis;
  bar.day = grid.day_of(rec.date);
  if (bar.day) {
    const double c = grid.days[static_cast<std::size_t>(*bar.day)].center;
    const double half = theme.geometry.bar_width / 2;
    bar.x = {c - half, c + half};
  }
  bar.label = duration_label(rec.duration_minutes);
  if (rec.quality) bar.saturation_step = std::clamp(*rec.quality, 0, 3);
  return bar;
}

}  // namespace emaviz::renderer
