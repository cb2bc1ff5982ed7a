#include "emaviz/renderer/theme.hpp"

#include <algorithm>
#include <stdexcept>

namespace emaviz::renderer {

namespace {

constexpr std::array<std::string_view, 10> kChartNames = {
    "my-sleep",          "symptom-intensity", "symptom-occurrence", "emotions", "worry-target",
    "worry-levels",      "expect-vs-reality", "school",             "peer-worry", "peer-quality"};

// Stroked line art in a 16x16 box.
const std::map<std::string, std::string>& builtin_icons() {
  static const std::map<std::string, std::string> icons = {
      // worry targets
      {"family", "M2 8L8 2.5L14 8M3.5 6.8V14H12.5V6.8M6.5 14V10H9.5V14"},
      {"friends", "M5 7a2 2 0 1 0 0.01 0M11 7a2 2 0 1 0 0.01 0M1.5 14c0-3 7-3 7 0M7.5 14c0-3 7-3 7 0"},
      {"strangers", "M8 6a2.5 2.5 0 1 0 0.01 0M3 14.5c0-4 10-4 10 0M11.5 1.5l3 3M14.5 1.5l-3 3"},
      {"school", "M1.5 6L8 2.5L14.5 6L8 9.5ZM4 7.5V11.5C6 13.5 10 13.5 12 11.5V7.5M14.5 6V10"},
      {"sports", "M8 1.5a6.5 6.5 0 1 0 0.01 0M2 6.5C5 8 11 8 14 6.5M2 9.5C5 8 11 8 14 9.5"},
      {"health", "M6 2H10V6H14V10H10V14H6V10H2V6H6Z"},
      // school miss reasons
      {"weekend", "M2 3.5H14V14H2ZM2 6.5H14M5 1.5V4.5M11 1.5V4.5M5 10H7M9 10H11"},
      {"holiday", "M8 1.5L9.8 6H14.5L10.7 8.8L12.2 13.5L8 10.6L3.8 13.5L5.3 8.8L1.5 6H6.2Z"},
      {"vacation", "M8 5a3 3 0 1 0 0.01 0M8 0.5V2.5M8 13.5V15.5M0.5 8H2.5M13.5 8H15.5M2.7 2.7L4.1 4.1M11.9 11.9L13.3 13.3M2.7 13.3L4.1 11.9M11.9 4.1L13.3 2.7"},
      {"pain", "M9.5 1L4 9H8L6.5 15L12 7H8Z"},
      {"sick", "M7 2.5a1.5 1.5 0 0 1 3 0V10a2.8 2.8 0 1 1 -3 0ZM8.5 6V11.5"},
      {"medical appointment", "M2 2H14V14H2ZM8 4.5V11.5M4.5 8H11.5"},
      {"home-schooled", "M2 8L8 2.5L14 8M3.5 6.8V14H12.5V6.8M5.5 12L8 10.5L10.5 12"},
      {"online", "M1.5 3H14.5V11H1.5ZM5 14H11M8 11V14"},
      // attendance and overlays
      {"school-missed", "M1.5 6L8 2.5L14.5 6L8 9.5ZM4 7.5V11.5C6 13.5 10 13.5 12 11.5V7.5M2 2L14 14"},
      {"check", "M2 8.5L6 12.5L14 3.5"},
      {"avoid", "M8 10a2.2 2.2 0 1 0 0.01 0M2 13C2 3 14 3 14 10M11.5 8L14 10.5L16 8"},
  };
  return icons;
}

std::string hue_key(ema::Facet f) { return std::string(ema::to_string(f)); }

}  // namespace

std::string_view to_string(ChartId id) { return kChartNames[index_of(id)]; }

ChartId parse_chart_id(std::string_view s) {
  for (std::size_t i = 0; i < kChartNames.size(); ++i)
    if (kChartNames[i] == s) return kChartOrder[i];
  throw std::invalid_argument("unknown chart '" + std::string(s) + "'");
}

std::size_t index_of(ChartId id) { return static_cast<std::size_t>(id); }

ema::Facet facet_of(ChartId id) {
  switch (id) {
    case ChartId::my_sleep: return ema::Facet::sleep;
    case ChartId::symptom_intensity:
    case ChartId::symptom_occurrence: return ema::Facet::symptoms;
    case ChartId::emotions: return ema::Facet::emotions;
    case ChartId::worry_target:
    case ChartId::worry_levels:
    case ChartId::expect_vs_reality: return ema::Facet::worries;
    case ChartId::school: return ema::Facet::school;
    case ChartId::peer_worry:
    case ChartId::peer_quality: return ema::Facet::peers;
  }
  return ema::Facet::sleep;
}

Rgb Theme::ramp(double hue, int step) const {
  return to_rgb({hue, saturation_ramp[static_cast<std::size_t>(std::clamp(step, 0, 3))],
                 ramp_lightness});
}

Rgb Theme::facet_colour(ema::Facet f, int step) const {
  switch (f) {
    case ema::Facet::sleep: return ramp(hue_sleep, step);
    case ema::Facet::symptoms: return ramp(hue_symptoms, step);
    case ema::Facet::emotions: return ramp(emotion_hues[0], step);
    case ema::Facet::worries: return ramp(hue_worries, step);
    case ema::Facet::school:
    case ema::Facet::peers: return ramp(hue_social, step);
  }
  return text;
}

Theme default_theme() {
  Theme t;
  t.icons = builtin_icons();
  return t;
}

std::vector<std::string> check_theme(const Theme& t) {
  std::vector<std::string> errors;
  for (std::size_t i = 1; i < t.saturation_ramp.size(); ++i) {
    if (!(t.saturation_ramp[i] > t.saturation_ramp[i - 1]))
      errors.push_back("saturation ramp must be strictly increasing");
  }
  if (t.saturation_ramp[0] <= 0 || t.saturation_ramp[3] > 100)
    errors.push_back("saturation ramp must lie in (0, 100]");
  const std::array<std::pair<const char*, Rgb>, 3> greys = {
      {{"stripe_grey", t.stripe_grey}, {"stripe_white", t.stripe_white}, {"absence_grey", t.absence_grey}}};
  for (std::size_t i = 0; i < greys.size(); ++i) {
    for (std::size_t k = i + 1; k < greys.size(); ++k) {
      const double c = contrast_ratio(greys[i].second, greys[k].second);
      if (c < t.min_grey_contrast) {
        errors.push_back(std::string(greys[i].first) + " and " + greys[k].first + " contrast " +
                         std::to_string(c) + " is below the minimum");
      }
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = i + 1; k < 4; ++k) {
      if (hue_distance(t.emotion_hues[i], t.emotion_hues[k]) < t.min_emotion_hue_separation)
        errors.push_back("emotion hues " + std::to_string(i) + " and " + std::to_string(k) +
                         " are too close");
    }
  }
  const auto& g = t.geometry;
  if (g.day_width <= 0 || g.sub_slot_width * 3 > g.day_width)
    errors.push_back("three sub-slots must fit in a day column");
  if (g.bar_width <= 0 || g.bar_width > g.sub_slot_width)
    errors.push_back("bars must fit in a sub-slot");
  for (auto id : kChartOrder) {
    const double ratio = g.canvas_width() / g.block_height(id);
    if (ratio < 2 || ratio > 3)
      errors.push_back(std::string(to_string(id)) + " block width/height ratio " +
                       std::to_string(ratio) + " outside [2, 3]");
    if (g.block_height(id) <= g.title_band + g.bottom_pad + 20)
      errors.push_back(std::string(to_string(id)) + " block too short for its plot");
  }
  if (t.symptom_rows.empty()) errors.push_back("no symptom rows");
  if (t.caption_max_chars < 1 || t.caption_line_chars < 1 || t.caption_max_lines < 1)
    errors.push_back("caption limits must be positive");
  for (const auto& [key, _] : builtin_icons())
    if (!t.icons.contains(key)) errors.push_back("icon '" + key + "' missing");
  return errors;
}

namespace {

nlohmann::json colour(const Rgb& c) { return hex(c); }

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_colour(const nlohmann::json& j, const char* key, Rgb& out) {
  if (j.contains(key)) out = parse_hex(j.at(key).get<std::string>());
}

}  // namespace

nlohmann::json theme_to_json(const Theme& t) {
  const auto& g = t.geometry;
  nlohmann::json heights = nlohmann::json::object();
  for (auto id : kChartOrder) heights[std::string(to_string(id))] = g.block_height(id);
  return {
      {"hues",
       {{hue_key(ema::Facet::sleep), t.hue_sleep},
        {hue_key(ema::Facet::symptoms), t.hue_symptoms},
        {hue_key(ema::Facet::worries), t.hue_worries},
        {"school-peers", t.hue_social}}},
      {"emotion_hues", t.emotion_hues},
      {"emotion_names", t.emotion_names},
      {"saturation_ramp", t.saturation_ramp},
      {"ramp_lightness", t.ramp_lightness},
      {"colours",
       {{"background", colour(t.background)},
        {"stripe_grey", colour(t.stripe_grey)},
        {"stripe_white", colour(t.stripe_white)},
        {"absence_grey", colour(t.absence_grey)},
        {"glyph_grey", colour(t.glyph_grey)},
        {"neutral_fill", colour(t.neutral_fill)},
        {"no_interaction_dark", colour(t.no_interaction_dark)},
        {"interaction_light", colour(t.interaction_light)},
        {"text", colour(t.text)}}},
      {"min_grey_contrast", t.min_grey_contrast},
      {"min_emotion_hue_separation", t.min_emotion_hue_separation},
      {"fonts",
       {{"title", t.fonts.title},
        {"label", t.fonts.label},
        {"small", t.fonts.small},
        {"glyph", t.fonts.glyph}}},
      {"geometry",
       {{"margin_left", g.margin_left},
        {"margin_right", g.margin_right},
        {"day_width", g.day_width},
        {"sub_slot_width", g.sub_slot_width},
        {"bar_width", g.bar_width},
        {"header_height", g.header_height},
        {"block_gap", g.block_gap},
        {"footer_height", g.footer_height},
        {"title_band", g.title_band},
        {"bottom_pad", g.bottom_pad},
        {"block_heights", heights}}},
      {"symptom_rows", t.symptom_rows},
      {"caption", {{"max_chars", t.caption_max_chars},
                   {"line_chars", t.caption_line_chars},
                   {"max_lines", t.caption_max_lines}}},
      {"icons", t.icons},
  };
}

Theme theme_from_json(const nlohmann::json& j) {
  Theme t = default_theme();
  if (j.contains("hues")) {
    const auto& h = j.at("hues");
    read(h, "sleep", t.hue_sleep);
    read(h, "symptoms", t.hue_symptoms);
    read(h, "worries", t.hue_worries);
    read(h, "school-peers", t.hue_social);
  }
  read(j, "emotion_hues", t.emotion_hues);
  read(j, "emotion_names", t.emotion_names);
  read(j, "saturation_ramp", t.saturation_ramp);
  read(j, "ramp_lightness", t.ramp_lightness);
  if (j.contains("colours")) {
    const auto& c = j.at("colours");
    read_colour(c, "background", t.background);
    read_colour(c, "stripe_grey", t.stripe_grey);
    read_colour(c, "stripe_white", t.stripe_white);
    read_colour(c, "absence_grey", t.absence_grey);
    read_colour(c, "glyph_grey", t.glyph_grey);
    read_colour(c, "neutral_fill", t.neutral_fill);
    read_colour(c, "no_interaction_dark", t.no_interaction_dark);
    read_colour(c, "interaction_light", t.interaction_light);
    read_colour(c, "text", t.text);
  }
  read(j, "min_grey_contrast", t.min_grey_contrast);
  read(j, "min_emotion_hue_separation", t.min_emotion_hue_separation);
  if (j.contains("fonts")) {
    const auto& f = j.at("fonts");
    read(f, "title", t.fonts.title);
    read(f, "label", t.fonts.label);
    read(f, "small", t.fonts.small);
    read(f, "glyph", t.fonts.glyph);
  }
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    auto& o = t.geometry;
    read(g, "margin_left", o.margin_left);
    read(g, "margin_right", o.margin_right);
    read(g, "day_width", o.day_width);
    read(g, "sub_slot_width", o.sub_slot_width);
    read(g, "bar_width", o.bar_width);
    read(g, "header_height", o.header_height);
    read(g, "block_gap", o.block_gap);
    read(g, "footer_height", o.footer_height);
    read(g, "title_band", o.title_band);
    read(g, "bottom_pad", o.bottom_pad);
    if (g.contains("block_heights")) {
      for (const auto& [name, h] : g.at("block_heights").items())
        o.block_heights[index_of(parse_chart_id(name))] = h.get<double>();
    }
  }
  read(j, "symptom_rows", t.symptom_rows);
  if (j.contains("caption")) {
    const auto& c = j.at("caption");
    read(c, "max_chars", t.caption_max_chars);
    read(c, "line_chars", t.caption_line_chars);
    read(c, "max_lines", t.caption_max_lines);
  }
  if (j.contains("icons")) {
    for (const auto& [k, v] : j.at("icons").items()) t.icons[k] = v.get<std::string>();
  }
  const auto errors = check_theme(t);
  if (!errors.empty()) throw std::invalid_argument("invalid theme: " + errors.front());
  return t;
}

}  // namespace emaviz::renderer
