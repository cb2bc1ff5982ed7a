#include "emaviz/renderer/dashboard.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "emaviz/ema/json.hpp"

namespace emaviz::renderer {

std::string format_number(double v) {
  v = std::round(v * 100) / 100;
  if (v == 0) v = 0;  // no "-0"
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  std::string s(buf, end);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string xml_escape(std::string_view raw) {
  std::string out;
  for (char c : sanitize_text(raw)) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

constexpr std::array<std::string_view, 7> kWeekdays = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

std::string_view weekday_name(Date d) {
  return kWeekdays[static_cast<std::size_t>(absl::GetWeekday(d))];
}

class Svg {
 public:
  Svg& raw(std::string_view s) {
    out_ << s;
    return *this;
  }
  Svg& num(double v) {
    out_ << format_number(v);
    return *this;
  }
  Svg& attr(std::string_view name, double v) {
    out_ << ' ' << name << "=\"" << format_number(v) << '"';
    return *this;
  }
  Svg& attr(std::string_view name, std::string_view v) {
    out_ << ' ' << name << "=\"" << xml_escape(v) << '"';
    return *this;
  }
  void rect(double x, double y, double w, double h, const Rgb& fill, std::string_view id = {},
            std::string_view extra = {}) {
    raw("<rect");
    if (!id.empty()) attr("id", id);
    attr("x", x).attr("y", y).attr("width", w).attr("height", h).attr("fill", hex(fill));
    raw(extra).raw("/>\n");
  }
  void text(double x, double y, std::string_view s, double size, const Rgb& fill,
            std::string_view anchor, std::string_view id = {}, std::string_view weight = {}) {
    raw("<text");
    if (!id.empty()) attr("id", id);
    attr("x", x).attr("y", y).attr("font-size", size).attr("fill", hex(fill));
    if (anchor != "start") attr("text-anchor", anchor);
    if (!weight.empty()) attr("font-weight", weight);
    raw(">").raw(xml_escape(s)).raw("</text>\n");
  }
  void use(std::string_view icon, double x, double y, double size, const Rgb& colour,
           std::string_view id = {}) {
    raw("<use");
    if (!id.empty()) attr("id", id);
    attr("xlink:href", "#icon-" + std::string(icon));
    attr("x", x).attr("y", y).attr("width", size).attr("height", size).attr("color", hex(colour));
    raw("/>\n");
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

void draw_legend(Svg& svg, const Legend& lg, const Theme& t) {
  double x = lg.x;
  const double mid = lg.y + lg.h / 2;
  for (const auto& item : lg.items) {
    if (item.swatch) {
      svg.rect(x, mid - 4, 8, 8, *item.swatch);
    } else if (!item.icon.empty()) {
      svg.use(item.icon, x - 1, mid - 5, 10, t.text);
    }
    x += 11;
    svg.text(x, mid + 0.35 * t.fonts.small, item.label, t.fonts.small, t.text, "start");
    x += 0.55 * t.fonts.small * static_cast<double>(code_points(item.label)) + 8;
  }
}

void draw_mark(Svg& svg, const Mark& m, const Theme& t) {
  switch (m.kind) {
    case MarkKind::bar:
      svg.rect(m.x, m.y, m.w, m.h, m.fill, m.id);
      break;
    case MarkKind::tile:
      svg.rect(m.x, m.y, m.w, m.h, m.fill, m.id,
               m.fill == t.background ? R"( stroke="#8c8c8c" stroke-width="1")" : "");
      break;
    case MarkKind::blank:
      svg.rect(m.x, m.y, m.w, m.h, m.fill, m.id);
      break;
    case MarkKind::circle:
      svg.raw("<circle").attr("id", m.id).attr("cx", m.x).attr("cy", m.y).attr("r", m.w / 2);
      svg.attr("fill", hex(m.fill)).raw("/>\n");
      break;
    case MarkKind::icon:
      svg.use(m.icon, m.x, m.y, m.w, m.fill, m.id);
      break;
    case MarkKind::text:
      svg.text(m.x, m.y, m.text, m.font_size, m.fill, "middle", m.id);
      break;
    case MarkKind::glyph:
      svg.text(m.x, m.y, m.text, m.font_size, m.fill, "middle", m.id, "bold");
      break;
    case MarkKind::clip:
      svg.raw("<line").attr("id", m.id).attr("x1", m.x - 2).attr("y1", m.y).attr("x2", m.x + m.w + 2);
      svg.attr("y2", m.y).attr("stroke", hex(m.fill)).raw(R"( stroke-width="2" stroke-dasharray="2 1"/>)")
          .raw("\n");
      break;
  }
}

}  // namespace

Dashboard render_dashboard(const ema::WeekDataset& week, const Theme& theme,
                           const DashboardOptions& options) {
  const auto& g = theme.geometry;
  Dashboard dash;
  dash.grid = layout_grid(week, theme);
  dash.width = dash.grid.canvas_width;

  double y = g.header_height;
  for (auto id : kChartOrder) {
    dash.offsets.push_back(y);
    dash.blocks.push_back(render_chart(id, week, dash.grid, theme));
    y += dash.blocks.back().height + g.block_gap;
  }
  dash.height = y - g.block_gap + g.footer_height;

  Svg svg;
  svg.raw(R"(<?xml version="1.0" encoding="UTF-8"?>)").raw("\n");
  svg.raw(R"(<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1")");
  svg.attr("width", dash.width).attr("height", dash.height);
  svg.raw(" viewBox=\"0 0 ").num(dash.width).raw(" ").num(dash.height).raw("\"");
  svg.raw(R"( font-family="Helvetica, Arial, sans-serif">)").raw("\n");

  svg.raw("<defs>\n");
  for (const auto& [name, path] : theme.icons) {
    svg.raw("<symbol").attr("id", "icon-" + name).raw(R"( viewBox="0 0 16 16">)");
    svg.raw("<path").attr("d", path);
    svg.raw(R"( fill="none" stroke="currentColor" stroke-width="1.5" stroke-linecap="round" stroke-linejoin="round"/>)");
    svg.raw("</symbol>\n");
  }
  svg.raw("</defs>\n");

  svg.rect(0, 0, dash.width, dash.height, theme.background, "background");
  svg.raw(R"(<g id="stripes">)").raw("\n");
  for (int d = 0; d < 7; ++d) {
    const auto& col = dash.grid.days[static_cast<std::size_t>(d)];
    svg.rect(col.bounds.left, 0, col.bounds.right - col.bounds.left, dash.height,
             col.grey ? theme.stripe_grey : theme.stripe_white, "stripe-d" + std::to_string(d));
  }
  svg.raw("</g>\n");

  const std::string title =
      options.title.empty() ? "Week of " + format_date(week.week_start()) + " - " + week.participant()
                            : options.title;
  svg.raw(R"(<g id="header">)").raw("\n");
  svg.text(4, 16, title, theme.fonts.title, theme.text, "start", "title", "bold");
  for (int d = 0; d < 7; ++d) {
    const auto& col = dash.grid.days[static_cast<std::size_t>(d)];
    svg.text(col.center, g.header_height - 14, weekday_name(col.date), theme.fonts.label, theme.text,
             "middle", "day-" + std::to_string(d));
    svg.text(col.center, g.header_height - 4, format_date(col.date).substr(5), theme.fonts.small,
             theme.text, "middle");
  }
  svg.raw("</g>\n");

  for (std::size_t i = 0; i < dash.blocks.size(); ++i) {
    const auto& b = dash.blocks[i];
    const std::string name(to_string(b.id));
    svg.raw("<g").attr("id", "chart-" + name).attr("class", "chart");
    svg.raw(" transform=\"translate(0 ").num(dash.offsets[i]).raw(")\">\n");
    svg.raw("<title>").raw(xml_escape(b.title)).raw("</title>\n");
    svg.text(4, 16, b.title, theme.fonts.title, theme.text, "start", {}, "bold");
    draw_legend(svg, b.legend, theme);
    svg.raw(R"(<line x1=")").num(g.margin_left).raw(R"(" y1=")").num(b.plot_bottom);
    svg.raw(R"(" x2=")").num(dash.grid.plot_right).raw(R"(" y2=")").num(b.plot_bottom);
    svg.raw(R"(" stroke="#bbbbbb" stroke-width="0.5"/>)").raw("\n");
    for (const auto& m : b.marks) draw_mark(svg, m, theme);
    svg.raw("</g>\n");
  }
  svg.raw("</svg>\n");
  dash.svg = svg.str();
  return dash;
}

nlohmann::json layout_json(const Dashboard& dash) {
  using nlohmann::json;
  json days = json::array();
  for (const auto& col : dash.grid.days) {
    json slots = json::array();
    for (const auto& s : col.slots) slots.push_back({s.left, s.right});
    days.push_back({{"date", format_date(col.date)},
                    {"left", col.bounds.left},
                    {"right", col.bounds.right},
                    {"center", col.center},
                    {"grey", col.grey},
                    {"slots", slots}});
  }
  json blocks = json::array();
  for (std::size_t i = 0; i < dash.blocks.size(); ++i) {
    const auto& b = dash.blocks[i];
    json marks = json::array();
    for (const auto& m : b.marks) {
      json jm = {{"kind", to_string(m.kind)}, {"id", m.id}, {"x", m.x}, {"y", m.y},
                 {"w", m.w},                  {"h", m.h},   {"fill", hex(m.fill)}};
      if (!m.text.empty()) jm["text"] = m.text;
      if (!m.icon.empty()) jm["icon"] = m.icon;
      if (m.day >= 0) jm["day"] = m.day;
      if (m.window) jm["window"] = ema::to_string(*m.window);
      if (m.kind == MarkKind::bar || m.kind == MarkKind::tile || m.kind == MarkKind::circle)
        jm["value"] = m.value;
      marks.push_back(std::move(jm));
    }
    json bands = json::array();
    for (const auto& band : b.bands) bands.push_back({{"label", band.label}, {"top", band.top}, {"bottom", band.bottom}});
    blocks.push_back({{"chart", to_string(b.id)},
                      {"facet", b.facet},
                      {"title", b.title},
                      {"y", dash.offsets[i]},
                      {"width", b.width},
                      {"height", b.height},
                      {"plot_top", b.plot_top},
                      {"plot_bottom", b.plot_bottom},
                      {"bands", bands},
                      {"marks", marks}});
  }
  return {{"width", dash.width}, {"height", dash.height}, {"days", days}, {"blocks", blocks}};
}

}  // namespace emaviz::renderer
