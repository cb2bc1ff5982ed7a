#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emaviz/ema/week.hpp"
#include "emaviz/renderer/chart_id.hpp"
#include "emaviz/renderer/layout.hpp"
#include "emaviz/renderer/theme.hpp"

namespace emaviz::renderer {

enum class MarkKind {
  bar,
  tile,
  circle,
  icon,
  text,
  /// Short rule at a clipped sleep-bar end.
  clip,
  /// White backing behind a missing-data glyph.
  blank,
  /// The grey '?'.
  glyph,
};

std::string_view to_string(MarkKind k);

/// A positioned mark in block-local coordinates (x right, y down from the block top).
/// Circles use (x, y) as centre and w as diameter; text uses (x, y) as the baseline
/// centre and w as its estimated width.
struct Mark {
  MarkKind kind = MarkKind::bar;
  std::string id;
  double x = 0, y = 0, w = 0, h = 0;
  Rgb fill;
  std::string text;
  std::string icon;
  double font_size = 0;
  /// Slot the mark belongs to; a mark with a day but no window spans the day column.
  int day = -1;
  std::optional<ema::SurveyWindow> window;
  /// Datum behind bars and tiles (magnitude, level or diverging score).
  double value = 0;

  double left() const { return kind == MarkKind::circle || kind == MarkKind::text ? x - w / 2 : x; }
  double right() const { return left() + w; }
};

struct LegendItem {
  std::string label;
  std::optional<Rgb> swatch;
  std::string icon;
};

struct Legend {
  double x = 0, y = 0, w = 0, h = 0;
  std::vector<LegendItem> items;
};

/// A labelled vertical band inside a block: emotion panels, heatmap rows, tile rows.
struct Band {
  std::string label;
  double top = 0, bottom = 0;
};

struct ChartBlock {
  ChartId id = ChartId::my_sleep;
  ema::Facet facet = ema::Facet::sleep;
  std::string title;
  double width = 0, height = 0;
  /// Data area inside the block.
  double plot_top = 0, plot_bottom = 0;
  std::vector<Band> bands;
  Legend legend;
  std::vector<Mark> marks;
  /// Grid the block was laid out on.
  LayoutGrid grid;

  std::size_t count(MarkKind k) const;
};

/// Lays out one chart of the dashboard. Missing question-slots get a white blank and a
/// grey '?'; Pending slots stay empty; a supplied zero draws a zero-height bar.
ChartBlock render_chart(ChartId kind, const ema::WeekDataset& week, const LayoutGrid& grid,
                        const Theme& theme);
/// As above, by name; throws std::invalid_argument for unknown chart names.
ChartBlock render_chart(std::string_view kind, const ema::WeekDataset& week,
                        const LayoutGrid& grid, const Theme& theme);

std::string_view chart_title(ChartId id);

/// Keeps the first `max_chars` code points (appending an ellipsis when cut) and wraps at
/// spaces into lines of at most `line_chars` code points, at most `max_lines` lines.
std::vector<std::string> wrap_caption(std::string_view text, int max_chars, int line_chars,
                                      int max_lines);

/// Valid UTF-8 without XML-forbidden control characters; bad bytes become U+FFFD.
std::string sanitize_text(std::string_view text);
std::size_t code_points(std::string_view utf8);

}  // namespace emaviz::renderer
