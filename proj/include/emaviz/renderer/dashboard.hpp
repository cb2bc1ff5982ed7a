#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "emaviz/ema/week.hpp"
#include "emaviz/renderer/chart.hpp"
#include "emaviz/renderer/theme.hpp"

namespace emaviz::renderer {

struct Dashboard {
  std::string svg;
  /// Blocks in drawing order; `offsets[i]` is the document y of block i.
  std::vector<ChartBlock> blocks;
  std::vector<double> offsets;
  LayoutGrid grid;
  double width = 0;
  double height = 0;
};

struct DashboardOptions {
  /// Header line; the participant code is used when empty.
  std::string title;
};

/// The whole week as one SVG document, ten charts stacked on a shared day grid.
/// Pure: the same dataset and theme produce byte-identical output.
Dashboard render_dashboard(const ema::WeekDataset& week, const Theme& theme = default_theme(),
                           const DashboardOptions& options = {});

/// Geometry of every block and mark, for clients that lay out their own view.
nlohmann::json layout_json(const Dashboard& dashboard);

/// "12.5", "3", "-0.25": two decimals at most, trailing zeros dropped.
std::string format_number(double v);

/// Escapes &, <, >, " and ' after sanitize_text.
std::string xml_escape(std::string_view text);

}  // namespace emaviz::renderer
