#include "emaviz/renderer/chart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emaviz/ema/measures.hpp"

namespace emaviz::renderer {

using ema::SurveyWindow;
namespace qid = ema::qid;

std::string_view to_string(MarkKind k) {
  switch (k) {
    case MarkKind::bar: return "bar";
    case MarkKind::tile: return "tile";
    case MarkKind::circle: return "circle";
    case MarkKind::icon: return "icon";
    case MarkKind::text: return "text";
    case MarkKind::clip: return "clip";
    case MarkKind::blank: return "blank";
    case MarkKind::glyph: return "glyph";
  }
  return "?";
}

std::string_view chart_title(ChartId id) {
  switch (id) {
    case ChartId::my_sleep: return "My sleep";
    case ChartId::symptom_intensity: return "How intense my symptoms were";
    case ChartId::symptom_occurrence: return "When symptoms occurred";
    case ChartId::emotions: return "How I felt";
    case ChartId::worry_target: return "What I worried about";
    case ChartId::worry_levels: return "How worried and how certain";
    case ChartId::expect_vs_reality: return "Expected vs. actual";
    case ChartId::school: return "Going to school";
    case ChartId::peer_worry: return "Worry about friends";
    case ChartId::peer_quality: return "Getting along with friends";
  }
  return "";
}

std::size_t ChartBlock::count(MarkKind k) const {
  return static_cast<std::size_t>(
      std::count_if(marks.begin(), marks.end(), [k](const Mark& m) { return m.kind == k; }));
}

// ---- text -----------------------------------------------------------------

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string sanitize_text(std::string_view s) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      if (c >= 0x20 || c == '\t' || c == '\n') out += static_cast<char>(c == '\t' || c == '\n' ? ' ' : c);
      else if (c == '\r') out += ' ';
      ++i;
      continue;
    }
    int len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) len = 2, cp = c & 0x1F;
    else if ((c & 0xF0) == 0xE0) len = 3, cp = c & 0x0F;
    else if ((c & 0xF8) == 0xF0) len = 4, cp = c & 0x07;
    bool ok = len > 0 && i + static_cast<std::size_t>(len) <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      ok = (cc & 0xC0) == 0x80;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates, beyond U+10FFFF, and the two XML non-characters.
    if (ok) {
      static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= kMin[len] && !(cp >= 0xD800 && cp <= 0xDFFF) && cp <= 0x10FFFF && cp != 0xFFFE &&
           cp != 0xFFFF;
    }
    if (ok) {
      out.append(s.substr(i, static_cast<std::size_t>(len)));
      i += static_cast<std::size_t>(len);
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

namespace {

// Byte offset of the n-th code point.
std::size_t byte_offset(std::string_view s, std::size_t n) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (seen == n) return i;
      ++seen;
    }
  }
  return s.size();
}

}  // namespace

std::vector<std::string> wrap_caption(std::string_view raw, int max_chars, int line_chars,
                                      int max_lines) {
  std::string text = sanitize_text(raw);
  // Collapse runs of spaces.
  std::string collapsed;
  for (char c : text) {
    if (c == ' ' && (collapsed.empty() || collapsed.back() == ' ')) continue;
    collapsed += c;
  }
  while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
  text = collapsed;
  const auto limit = static_cast<std::size_t>(max_chars);
  if (code_points(text) > limit) {
    text = text.substr(0, byte_offset(text, limit - 1));
    while (!text.empty() && text.back() == ' ') text.pop_back();
    text += "\xE2\x80\xA6";
  }

  std::vector<std::string> lines;
  const auto width = static_cast<std::size_t>(line_chars);
  std::string_view rest = text;
  while (!rest.empty()) {
    if (code_points(rest) <= width) {
      lines.emplace_back(rest);
      break;
    }
    const auto cut = byte_offset(rest, width);
    auto space = rest.substr(0, cut + 1).rfind(' ');
    if (space == std::string_view::npos || space == 0) {
      lines.emplace_back(rest.substr(0, cut));
      rest.remove_prefix(cut);
    } else {
      lines.emplace_back(rest.substr(0, space));
      rest.remove_prefix(space + 1);
    }
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  }
  if (lines.size() > static_cast<std::size_t>(max_lines)) {
    lines.resize(static_cast<std::size_t>(max_lines));
    auto& last = lines.back();
    if (code_points(last) >= width) last = last.substr(0, byte_offset(last, width - 1));
    last += "\xE2\x80\xA6";
  }
  return lines;
}

// ---- layout helpers ---------------------------------------------------------

namespace {

constexpr double kIconSize = 16;

double text_width(std::string_view s, double font) {
  return 0.55 * font * static_cast<double>(code_points(s));
}

std::string day_tag(int d, SurveyWindow w) {
  return "d" + std::to_string(d) + "-w" + std::to_string(ema::index_of(w));
}

enum class Cell { pending, missing, present };

class Builder {
 public:
  Builder(ChartId id, const ema::WeekDataset& week, const LayoutGrid& grid, const Theme& theme)
      : week_(week), grid_(grid), t_(theme), name_(to_string(id)) {
    b_.id = id;
    b_.facet = facet_of(id);
    b_.title = chart_title(id);
    b_.grid = grid;
    b_.width = grid.canvas_width;
    b_.height = theme.geometry.block_height(id);
    b_.plot_top = theme.geometry.title_band;
    b_.plot_bottom = b_.height - theme.geometry.bottom_pad;
  }

  ChartBlock& block() { return b_; }
  const Theme& theme() const { return t_; }
  const LayoutGrid& grid() const { return grid_; }

  const ema::SlotStatus& status(int d, SurveyWindow w) const { return week_.at(d, w); }
  const ema::EmaResponse* response(int d, SurveyWindow w) const { return week_.response(d, w); }

  /// Whether the answer to `q` in slot (d, w) is there, missing, or not due yet.
  Cell cell(int d, SurveyWindow w, std::string_view q) const {
    const auto& s = status(d, w);
    if (std::holds_alternative<ema::Pending>(s)) return Cell::pending;
    if (std::holds_alternative<ema::Missed>(s)) return Cell::missing;
    return response(d, w)->answer(q) ? Cell::present : Cell::missing;
  }

  template <class T>
  const T* get(int d, SurveyWindow w, std::string_view q) const {
    const auto* r = response(d, w);
    return r ? r->get<T>(q) : nullptr;
  }

  std::string id(std::string_view kind, std::string_view sub, int d, SurveyWindow w) const {
    std::string s = std::string(kind) + "-" + name_ + "-";
    if (!sub.empty()) s += std::string(sub) + "-";
    return s + day_tag(d, w);
  }

  Mark& add(Mark m) {
    b_.marks.push_back(std::move(m));
    return b_.marks.back();
  }

  /// White blank over [top, bottom] of the span plus a centred grey '?'.
  void glyph(std::string_view sub, const Span& x, double top, double bottom, int d, SurveyWindow w,
             bool slot_level) {
    Mark blank;
    blank.kind = MarkKind::blank;
    blank.id = id("blank", sub, d, w);
    blank.x = x.left;
    blank.y = top;
    blank.w = x.right - x.left;
    blank.h = bottom - top;
    blank.fill = t_.background;
    blank.day = d;
    if (slot_level) blank.window = w;
    add(blank);
    Mark q;
    q.kind = MarkKind::glyph;
    q.id = id("miss", sub, d, w);
    q.text = "?";
    q.font_size = t_.fonts.glyph;
    q.x = x.center();
    q.w = text_width("?", q.font_size);
    q.y = (top + bottom) / 2 + 0.35 * q.font_size;
    q.fill = t_.glyph_grey;
    q.day = d;
    if (slot_level) q.window = w;
    add(q);
  }

  /// Bar rising from `bottom`, height value/max of the band.
  void bar(std::string_view sub, int d, SurveyWindow w, double value, double max, double top,
           double bottom, Rgb fill) {
    const auto& slot = grid_.slot(d, w);
    Mark m;
    m.kind = MarkKind::bar;
    m.id = id("bar", sub, d, w);
    m.w = t_.geometry.bar_width;
    m.x = slot.center() - m.w / 2;
    m.h = std::clamp(value, 0.0, max) / max * (bottom - top);
    m.y = bottom - m.h;
    m.fill = fill;
    m.day = d;
    m.window = w;
    m.value = value;
    add(m);
  }

  void icon(std::string_view id_text, std::string_view icon, double cx, double top, double size,
            Rgb colour, int d) {
    Mark m;
    m.kind = MarkKind::icon;
    m.id = std::string(id_text);
    m.icon = std::string(icon);
    m.x = cx - size / 2;
    m.y = top;
    m.w = m.h = size;
    m.fill = colour;
    m.day = d;
    add(m);
  }

  void text(std::string_view id_text, std::string_view s, double cx, double baseline, double font,
            Rgb colour, int d, std::optional<SurveyWindow> w = std::nullopt) {
    Mark m;
    m.kind = MarkKind::text;
    m.id = std::string(id_text);
    m.text = std::string(s);
    m.font_size = font;
    m.x = cx;
    m.y = baseline;
    m.w = text_width(s, font);
    m.fill = colour;
    m.day = d;
    m.window = w;
    add(m);
  }

  /// Text in the left margin, right-aligned against the plot (centre stored).
  void margin_label(std::string_view id_text, std::string_view s, double baseline) {
    const double w = text_width(s, t_.fonts.small);
    text(id_text, s, t_.geometry.margin_left - 3 - w / 2, baseline, t_.fonts.small, t_.text, -1);
  }

  void legend(std::vector<LegendItem> items) {
    auto& lg = b_.legend;
    lg.items = std::move(items);
    double w = 0;
    for (const auto& it : lg.items) w += 8 + 3 + text_width(it.label, t_.fonts.small) + 8;
    lg.w = std::max(0.0, w - 8);
    lg.h = 12;
    lg.x = b_.width - t_.geometry.margin_right - lg.w;
    lg.y = 5;
  }

  /// Vertical scale labels for 0..10 bar bands.
  void scale_labels(std::string_view sub, double top, double bottom) {
    margin_label("axis-" + name_ + (sub.empty() ? "" : "-" + std::string(sub)) + "-max", "10",
                 top + 0.35 * t_.fonts.small);
    margin_label("axis-" + name_ + (sub.empty() ? "" : "-" + std::string(sub)) + "-min", "0",
                 bottom);
  }

  /// One bar per slot for a 0..10 question, or a glyph when missing.
  void bars_per_slot(std::string_view q, std::string_view sub, double top, double bottom, Rgb fill) {
    for (int d = 0; d < 7; ++d) {
      for (auto w : ema::kWindows) {
        switch (cell(d, w, q)) {
          case Cell::pending: break;
          case Cell::missing: glyph(sub, grid_.slot(d, w), top, bottom, d, w, true); break;
          case Cell::present:
            bar(sub, d, w, get<ema::Magnitude>(d, w, q)->value, 10, top, bottom, fill);
            break;
        }
      }
    }
  }

 private:
  const ema::WeekDataset& week_;
  const LayoutGrid& grid_;
  const Theme& t_;
  std::string name_;
  ChartBlock b_;
};

// ---- the ten charts ---------------------------------------------------------

void my_sleep(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const double label_base = blk.plot_top + 8;
  blk.plot_top += 12;
  const double top = blk.plot_top, bottom = blk.plot_bottom, ph = bottom - top;
  b.margin_label("axis-my-sleep-noon-before", "noon", top + 0.35 * t.fonts.small);
  b.margin_label("axis-my-sleep-midnight", "00:00", top + ph / 2 + 0.35 * t.fonts.small);
  b.margin_label("axis-my-sleep-noon", "noon", bottom);
  b.legend({{"poor", t.ramp(t.hue_sleep, 0), ""},
            {"okay", t.ramp(t.hue_sleep, 1), ""},
            {"good", t.ramp(t.hue_sleep, 2), ""},
            {"great", t.ramp(t.hue_sleep, 3), ""}});
  for (int d = 0; d < 7; ++d) {
    const auto w = SurveyWindow::morning;
    const auto& col = b.grid().days[static_cast<std::size_t>(d)];
    const auto& s = b.status(d, w);
    if (std::holds_alternative<ema::Pending>(s)) continue;
    const auto rec = std::holds_alternative<ema::Completed>(s) ? ema::sleep_record(*b.response(d, w))
                                                               : std::nullopt;
    if (!rec) {
      b.glyph("", col.bounds, top, bottom, d, w, false);
      continue;
    }
    const auto bar = sleep_bar_geometry(*rec, b.grid(), t);
    Mark m;
    m.kind = MarkKind::bar;
    m.id = b.id("bar", "", d, w);
    m.x = bar.x.left;
    m.w = bar.x.right - bar.x.left;
    m.y = top + bar.start * ph;
    m.h = (bar.end - bar.start) * ph;
    m.fill = bar.saturation_step ? t.ramp(t.hue_sleep, *bar.saturation_step) : t.neutral_fill;
    m.day = d;
    m.value = rec->duration_minutes;
    b.add(m);
    auto clip = [&](std::string_view which, double y) {
      Mark c;
      c.kind = MarkKind::clip;
      c.id = b.id("clip", which, d, w);
      c.x = bar.x.left;
      c.w = bar.x.right - bar.x.left;
      c.y = y;
      c.h = 0;
      c.fill = t.text;
      c.day = d;
      b.add(c);
    };
    if (bar.clipped_start) clip("start", top);
    if (bar.clipped_end) clip("end", bottom);
    b.text(b.id("label", "", d, w), bar.label, col.center, label_base, t.fonts.small, t.text, d);
  }
}

void symptom_intensity(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  b.scale_labels("", blk.plot_top, blk.plot_bottom);
  b.legend({{"intensity 0-10", t.ramp(t.hue_symptoms, 3), ""}});
  b.bars_per_slot(qid::symptom_intensity, "", blk.plot_top, blk.plot_bottom, t.ramp(t.hue_symptoms, 3));
}

void symptom_occurrence(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const double check_row = 16;
  const double rows_top = blk.plot_top + check_row;
  const double row_h = (blk.plot_bottom - rows_top) / static_cast<double>(t.symptom_rows.size());
  blk.bands.push_back({"medication", blk.plot_top, rows_top});
  for (std::size_t r = 0; r < t.symptom_rows.size(); ++r) {
    const double top = rows_top + static_cast<double>(r) * row_h;
    blk.bands.push_back({t.symptom_rows[r], top, top + row_h});
  }
  b.legend({{"present", t.ramp(t.hue_symptoms, 3), ""},
            {"absent", t.absence_grey, ""},
            {"medication", std::nullopt, "check"}});
  b.margin_label("axis-symptom-occurrence-medication", "meds", rows_top - 4);
  for (std::size_t r = 0; r < t.symptom_rows.size(); ++r) {
    // Abbreviated row names fit the margin.
    auto name = t.symptom_rows[r];
    if (code_points(name) > 8) name = name.substr(0, byte_offset(name, 7)) + ".";
    b.margin_label("axis-symptom-occurrence-r" + std::to_string(r), name,
                   rows_top + (static_cast<double>(r) + 0.5) * row_h + 0.35 * t.fonts.small);
  }
  for (int d = 0; d < 7; ++d) {
    bool medicated = false;
    for (auto w : ema::kWindows) {
      if (const auto* f = b.get<ema::Flag>(d, w, qid::medication_taken); f && f->value) medicated = true;
      switch (b.cell(d, w, qid::symptom_types)) {
        case Cell::pending: break;
        case Cell::missing:
          b.glyph("", b.grid().slot(d, w), rows_top, blk.plot_bottom, d, w, true);
          break;
        case Cell::present: {
          const auto& chosen = b.get<ema::Categories>(d, w, qid::symptom_types)->labels;
          const auto& slot = b.grid().slot(d, w);
          for (std::size_t r = 0; r < t.symptom_rows.size(); ++r) {
            const bool on = std::find(chosen.begin(), chosen.end(), t.symptom_rows[r]) != chosen.end();
            Mark m;
            m.kind = MarkKind::tile;
            m.id = b.id("tile", "r" + std::to_string(r), d, w);
            m.x = slot.left + 1;
            m.w = slot.right - slot.left - 2;
            m.y = rows_top + static_cast<double>(r) * row_h + 1;
            m.h = row_h - 2;
            m.fill = on ? t.ramp(t.hue_symptoms, 3) : t.absence_grey;
            m.day = d;
            m.window = w;
            m.value = on ? 1 : 0;
            b.add(m);
          }
          break;
        }
      }
    }
    if (medicated) {
      const auto& col = b.grid().days[static_cast<std::size_t>(d)];
      b.icon("check-symptom-occurrence-d" + std::to_string(d), "check", col.center,
             blk.plot_top + 1, 14, t.text, d);
    }
  }
}

constexpr std::array<std::string_view, 4> kEmotionNames = {"worried", "angry", "happy", "sad"};

void emotions(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const double gap = 6;
  const double panel_h = (blk.plot_bottom - blk.plot_top - 3 * gap) / 4;
  std::vector<LegendItem> legend;
  for (std::size_t p = 0; p < 4; ++p) {
    const double top = blk.plot_top + static_cast<double>(p) * (panel_h + gap);
    const double bottom = top + panel_h;
    blk.bands.push_back({std::string(kEmotionNames[p]), top, bottom});
    const auto colour = t.ramp(t.emotion_hues[p], 3);
    legend.push_back({std::string(kEmotionNames[p]), colour, ""});
    b.margin_label("axis-emotions-" + std::string(kEmotionNames[p]), kEmotionNames[p],
                   top + panel_h / 2 + 0.35 * t.fonts.small);
    b.bars_per_slot(ema::kEmotionQids[p], kEmotionNames[p], top, bottom, colour);
  }
  b.legend(std::move(legend));
}

void worry_target(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const auto w = SurveyWindow::morning;
  for (int d = 0; d < 7; ++d) {
    const auto& col = b.grid().days[static_cast<std::size_t>(d)];
    switch (b.cell(d, w, qid::worry_target)) {
      case Cell::pending: break;
      case Cell::missing: b.glyph("", col.bounds, blk.plot_top, blk.plot_bottom, d, w, false); break;
      case Cell::present: {
        const auto& labels = b.get<ema::Categories>(d, w, qid::worry_target)->labels;
        const std::string target = labels.empty() ? "" : labels.front();
        const auto colour = t.ramp(t.hue_worries, 3);
        double y = blk.plot_top + 6;
        if (t.icons.contains(target)) {
          b.icon("icon-worry-target-d" + std::to_string(d), target, col.center, y, 22, colour, d);
        }
        y += 22 + t.fonts.label + 2;
        b.text(b.id("label", "", d, w), target, col.center, y, t.fonts.label, t.text, d);
        if (const auto* txt = b.get<ema::Text>(d, w, qid::worry_text)) {
          const auto lines = wrap_caption(txt->value, t.caption_max_chars, t.caption_line_chars,
                                          t.caption_max_lines);
          for (std::size_t i = 0; i < lines.size(); ++i) {
            y += t.fonts.small + 2;
            b.text(b.id("caption", "l" + std::to_string(i), d, w), lines[i], col.center, y,
                   t.fonts.small, t.text, d);
          }
        }
        break;
      }
    }
  }
}

int saturation_step(int value) { return std::clamp((value - 1) * 4 / 10, 0, 3); }

void worry_levels(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const double overlay = 18;
  const double rows_top = blk.plot_top + overlay;
  const double row_h = (blk.plot_bottom - rows_top) / 2;
  blk.bands.push_back({"happened / avoided", blk.plot_top, rows_top});
  blk.bands.push_back({"worried", rows_top, rows_top + row_h});
  blk.bands.push_back({"certain", rows_top + row_h, blk.plot_bottom});
  b.legend({{"low", t.ramp(t.hue_worries, 0), ""},
            {"high", t.ramp(t.hue_worries, 3), ""},
            {"happened", std::nullopt, "check"},
            {"avoided", std::nullopt, "avoid"}});
  b.margin_label("axis-worry-levels-worried", "worried", rows_top + row_h / 2 + 0.35 * t.fonts.small);
  b.margin_label("axis-worry-levels-certain", "certain",
                 rows_top + 1.5 * row_h + 0.35 * t.fonts.small);
  const std::array<std::pair<std::string_view, std::string_view>, 2> rows = {
      {{qid::worry_level, "worried"}, {qid::worry_certainty, "certain"}}};
  const auto w = SurveyWindow::morning;
  for (int d = 0; d < 7; ++d) {
    const auto& col = b.grid().days[static_cast<std::size_t>(d)];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double top = rows_top + static_cast<double>(r) * row_h;
      switch (b.cell(d, w, rows[r].first)) {
        case Cell::pending: break;
        case Cell::missing: b.glyph(rows[r].second, col.bounds, top, top + row_h, d, w, false); break;
        case Cell::present: {
          const int v = b.get<ema::Magnitude>(d, w, rows[r].first)->value;
          Mark m;
          m.kind = MarkKind::tile;
          m.id = b.id("tile", rows[r].second, d, w);
          m.w = 3 * t.geometry.sub_slot_width - 8;
          m.x = col.center - m.w / 2;
          m.y = top + 2;
          m.h = row_h - 4;
          // Zero keeps an empty frame.
          m.fill = v == 0 ? t.background : t.ramp(t.hue_worries, saturation_step(v));
          m.day = d;
          m.value = v;
          b.add(m);
          break;
        }
      }
    }
    bool happened = false, avoided = false;
    for (auto later : {SurveyWindow::afternoon, SurveyWindow::evening}) {
      if (const auto* f = b.get<ema::Flag>(d, later, qid::worry_happened); f && f->value) happened = true;
      if (const auto* f = b.get<ema::Flag>(d, later, qid::worry_avoided); f && f->value) avoided = true;
    }
    if (happened)
      b.icon("check-worry-levels-d" + std::to_string(d), "check", col.center - 9, blk.plot_top + 2,
             14, t.text, d);
    if (avoided)
      b.icon("avoid-worry-levels-d" + std::to_string(d), "avoid", col.center + 9, blk.plot_top + 2,
             14, t.text, d);
  }
}

void expect_vs_reality(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const double top = blk.plot_top, bottom = blk.plot_bottom;
  const auto colour = t.ramp(t.hue_worries, 3);
  b.scale_labels("", top, bottom);
  b.legend({{"expected", t.ramp(t.hue_worries, 1), ""}, {"actual", colour, ""}});
  for (int d = 0; d < 7; ++d) {
    const auto m_w = SurveyWindow::morning;
    switch (b.cell(d, m_w, qid::worry_expected_badness)) {
      case Cell::pending: break;
      case Cell::missing: b.glyph("expected", b.grid().slot(d, m_w), top, bottom, d, m_w, true); break;
      case Cell::present: {
        const int v = b.get<ema::Magnitude>(d, m_w, qid::worry_expected_badness)->value;
        Mark c;
        c.kind = MarkKind::circle;
        c.id = b.id("circle", "expected", d, m_w);
        c.w = c.h = 10;
        c.x = b.grid().slot(d, m_w).center();
        c.y = bottom - std::clamp(v, 0, 10) / 10.0 * (bottom - top);
        c.fill = t.ramp(t.hue_worries, 1);
        c.day = d;
        c.window = m_w;
        c.value = v;
        b.add(c);
        break;
      }
    }
    for (auto w : {SurveyWindow::afternoon, SurveyWindow::evening}) {
      switch (b.cell(d, w, qid::worry_actual_badness)) {
        case Cell::pending: break;
        case Cell::missing: b.glyph("actual", b.grid().slot(d, w), top, bottom, d, w, true); break;
        case Cell::present:
          b.bar("actual", d, w, b.get<ema::Magnitude>(d, w, qid::worry_actual_badness)->value, 10,
                top, bottom, colour);
          break;
      }
    }
  }
}

std::string short_reason(const std::string& reason) {
  if (reason == "medical appointment") return "doctor";
  if (reason == "home-schooled") return "home";
  return reason;
}

void school(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const auto w = SurveyWindow::afternoon;
  const auto colour = t.ramp(t.hue_social, 3);
  for (int d = 0; d < 7; ++d) {
    const auto& col = b.grid().days[static_cast<std::size_t>(d)];
    switch (b.cell(d, w, qid::school_attended)) {
      case Cell::pending: break;
      case Cell::missing: b.glyph("", col.bounds, blk.plot_top, blk.plot_bottom, d, w, false); break;
      case Cell::present: {
        std::string icon = "school", label = "school";
        if (!b.get<ema::Flag>(d, w, qid::school_attended)->value) {
          icon = "school-missed";
          label = "missed";
          if (const auto* reason = b.get<ema::Categories>(d, w, qid::school_miss_reason);
              reason && !reason->labels.empty()) {
            icon = reason->labels.front();
            label = short_reason(reason->labels.front());
          }
        }
        const double y = blk.plot_top + (blk.plot_bottom - blk.plot_top) / 2 - 22;
        if (t.icons.contains(icon))
          b.icon("icon-school-d" + std::to_string(d), icon, col.center, y, 26, colour, d);
        b.text(b.id("label", "", d, w), label, col.center, y + 26 + t.fonts.label + 2, t.fonts.label,
               t.text, d);
        break;
      }
    }
  }
}

void peer_worry(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  b.scale_labels("", blk.plot_top, blk.plot_bottom);
  b.legend({{"worry 0-10", t.ramp(t.hue_social, 3), ""}});
  b.bars_per_slot(qid::peer_worry, "", blk.plot_top, blk.plot_bottom, t.ramp(t.hue_social, 3));
}

void peer_quality(Builder& b) {
  const auto& t = b.theme();
  auto& blk = b.block();
  const double row = 14;
  const double top = blk.plot_top, bottom = blk.plot_bottom - row - 4;
  const double zero = (top + bottom) / 2, half = (bottom - top) / 2;
  blk.bands.push_back({"how it went", top, bottom});
  blk.bands.push_back({"no friends", bottom + 4, blk.plot_bottom});
  b.margin_label("axis-peer-quality-up", "well", top + 0.35 * t.fonts.small);
  b.margin_label("axis-peer-quality-zero", "okay", zero + 0.35 * t.fonts.small);
  b.margin_label("axis-peer-quality-down", "badly", bottom);
  b.margin_label("axis-peer-quality-none", "alone", blk.plot_bottom - 3);
  const auto up = t.ramp(t.hue_social, 3), down = t.ramp(t.hue_social, 1);
  b.legend({{"better", up, ""}, {"worse", down, ""}, {"no time with friends", t.no_interaction_dark, ""}});
  for (int d = 0; d < 7; ++d) {
    for (auto w : ema::kWindows) {
      const auto* interacted = b.get<ema::Flag>(d, w, qid::peer_interacted);
      const bool alone = interacted && !interacted->value;
      const auto& slot = b.grid().slot(d, w);
      auto c = b.cell(d, w, qid::peer_quality);
      if (c == Cell::missing && alone && std::holds_alternative<ema::Completed>(b.status(d, w)))
        c = Cell::pending;  // nothing to rate, so nothing is missing
      switch (c) {
        case Cell::pending: break;
        case Cell::missing: b.glyph("", slot, top, bottom, d, w, true); break;
        case Cell::present: {
          const int score =
              ema::likert_to_diverging(b.get<ema::Level>(d, w, qid::peer_quality)->index + 1);
          Mark m;
          m.kind = MarkKind::bar;
          m.id = b.id("bar", "", d, w);
          m.w = t.geometry.bar_width;
          m.x = slot.center() - m.w / 2;
          m.h = std::abs(score) / 2.0 * half;
          m.y = score >= 0 ? zero - m.h : zero;
          m.fill = score >= 0 ? up : down;
          m.day = d;
          m.window = w;
          m.value = score;
          b.add(m);
          break;
        }
      }
      if (interacted) {
        Mark tile;
        tile.kind = MarkKind::tile;
        tile.id = b.id("tile", "alone", d, w);
        tile.x = slot.left + 1;
        tile.w = slot.right - slot.left - 2;
        tile.y = bottom + 4;
        tile.h = row;
        tile.fill = alone ? t.no_interaction_dark : t.interaction_light;
        tile.day = d;
        tile.window = w;
        tile.value = alone ? 1 : 0;
        b.add(tile);
      }
    }
  }
}

}  // namespace

ChartBlock render_chart(ChartId kind, const ema::WeekDataset& week, const LayoutGrid& grid,
                        const Theme& theme) {
  Builder b(kind, week, grid, theme);
  switch (kind) {
    case ChartId::my_sleep: my_sleep(b); break;
    case ChartId::symptom_intensity: symptom_intensity(b); break;
    case ChartId::symptom_occurrence: symptom_occurrence(b); break;
    case ChartId::emotions: emotions(b); break;
    case ChartId::worry_target: worry_target(b); break;
    case ChartId::worry_levels: worry_levels(b); break;
    case ChartId::expect_vs_reality: expect_vs_reality(b); break;
    case ChartId::school: school(b); break;
    case ChartId::peer_worry: peer_worry(b); break;
    case ChartId::peer_quality: peer_quality(b); break;
  }
  return std::move(b.block());
}

ChartBlock render_chart(std::string_view kind, const ema::WeekDataset& week, const LayoutGrid& grid,
                        const Theme& theme) {
  return render_chart(parse_chart_id(kind), week, grid, theme);
}

}  // namespace emaviz::renderer
