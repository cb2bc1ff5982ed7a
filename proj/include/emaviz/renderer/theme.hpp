#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "emaviz/renderer/chart_id.hpp"
#include "emaviz/renderer/color.hpp"

namespace emaviz::renderer {

struct FontSizes {
  double title = 13;
  double label = 9;
  double small = 7.5;
  double glyph = 14;
  friend bool operator==(const FontSizes&, const FontSizes&) = default;
};

struct Geometry {
  double margin_left = 40;
  double margin_right = 20;
  double day_width = 60;
  double sub_slot_width = 20;
  double bar_width = 14;
  double header_height = 40;
  double block_gap = 8;
  double footer_height = 8;
  /// Title band at the top of every block and padding below the plot.
  double title_band = 24;
  double bottom_pad = 8;
  /// Indexed by chart order.
  std::array<double, 10> block_heights = {240, 200, 220, 240, 180, 200, 200, 180, 200, 220};

  double canvas_width() const { return margin_left + 7 * day_width + margin_right; }
  double block_height(ChartId id) const { return block_heights[index_of(id)]; }
  friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Colours, type and geometry for the dashboard. Defaults are the built-in theme.
struct Theme {
  double hue_sleep = 140;
  double hue_symptoms = 5;
  double hue_worries = 215;
  /// Shared by School and Peers.
  double hue_social = 275;
  /// worried, angry, happy, sad
  std::array<double, 4> emotion_hues = {175, 45, 255, 330};
  std::array<std::string, 4> emotion_names = {"teal", "gold", "indigo", "pink"};
  /// Saturation steps in percent, lightest first; lightness is fixed.
  std::array<double, 4> saturation_ramp = {25, 50, 75, 100};
  double ramp_lightness = 50;

  Rgb background = parse_hex("#ffffff");
  Rgb stripe_grey = parse_hex("#e8e8e8");
  Rgb stripe_white = parse_hex("#ffffff");
  Rgb absence_grey = parse_hex("#c4c4c4");
  Rgb glyph_grey = parse_hex("#8c8c8c");
  Rgb neutral_fill = parse_hex("#a0a0a0");
  Rgb no_interaction_dark = parse_hex("#6e6e6e");
  Rgb interaction_light = parse_hex("#d9d9d9");
  Rgb text = parse_hex("#333333");

  double min_grey_contrast = 1.2;
  double min_emotion_hue_separation = 60;

  FontSizes fonts;
  Geometry geometry;

  /// Symptom heatmap rows, top to bottom.
  std::vector<std::string> symptom_rows = {"stomach ache", "headache",   "low back pain",
                                           "dizziness",    "limb pain",  "fast heartbeat",
                                           "nausea",       "body weakness"};
  /// Caption under the worry icon: characters kept, characters per line, lines.
  int caption_max_chars = 24;
  int caption_line_chars = 12;
  int caption_max_lines = 3;

  /// SVG path data in a 16x16 box, stroked. Keys: worry targets, school miss reasons,
  /// "school", "school-missed", "check", "avoid".
  std::map<std::string, std::string> icons;

  Rgb ramp(double hue, int step) const;
  Rgb facet_colour(ema::Facet f, int step = 3) const;

  friend bool operator==(const Theme&, const Theme&) = default;
};

/// Built-in theme including icon artwork.
Theme default_theme();

/// Human-readable violations: non-increasing ramp, greys closer than the contrast
/// minimum, emotion hues closer than the separation minimum, geometry that breaks the
/// sub-slot nesting or the block aspect range, missing icons.
std::vector<std::string> check_theme(const Theme& theme);

/// Full document; reading accepts any subset of keys on top of the defaults and
/// throws std::invalid_argument if the result fails check_theme.
nlohmann::json theme_to_json(const Theme& theme);
Theme theme_from_json(const nlohmann::json& j);

}  // namespace emaviz::renderer
