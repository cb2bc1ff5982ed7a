#include "emaviz/renderer/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace emaviz::renderer {

namespace {

double hue_channel(double p, double q, double t) {
  if (t < 0) t += 1;
  if (t > 1) t -= 1;
  if (t < 1.0 / 6) return p + (q - p) * 6 * t;
  if (t < 1.0 / 2) return q;
  if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
  return p;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255));
}

double linear(std::uint8_t c) {
  const double v = c / 255.0;
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Rgb to_rgb(const Hsl& c) {
  const double h = std::fmod(std::fmod(c.h, 360.0) + 360.0, 360.0) / 360.0;
  const double s = std::clamp(c.s, 0.0, 100.0) / 100.0;
  const double l = std::clamp(c.l, 0.0, 100.0) / 100.0;
  if (s == 0) return {to_byte(l), to_byte(l), to_byte(l)};
  const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
  const double p = 2 * l - q;
  return {to_byte(hue_channel(p, q, h + 1.0 / 3)), to_byte(hue_channel(p, q, h)),
          to_byte(hue_channel(p, q, h - 1.0 / 3))};
}

Hsl to_hsl(const Rgb& c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double l = (mx + mn) / 2;
  if (mx == mn) return {0, 0, l * 100};
  const double d = mx - mn;
  const double s = l > 0.5 ? d / (2 - mx - mn) : d / (mx + mn);
  double h = 0;
  if (mx == r) h = (g - b) / d + (g < b ? 6 : 0);
  else if (mx == g) h = (b - r) / d + 2;
  else h = (r - g) / d + 4;
  return {h * 60, s * 100, l * 100};
}

std::string hex(const Rgb& c) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "#";
  for (auto v : {c.r, c.g, c.b}) {
    out += digits[v >> 4];
    out += digits[v & 0xF];
  }
  return out;
}

Rgb parse_hex(std::string_view s) {
  auto bad = [&] { return std::invalid_argument("bad colour '" + std::string(s) + "'"); };
  if (s.empty() || s[0] != '#') throw bad();
  s.remove_prefix(1);
  std::array<int, 6> d{};
  if (s.size() == 3) {
    for (std::size_t i = 0; i < 3; ++i) d[2 * i] = d[2 * i + 1] = hex_digit(s[i]);
  } else if (s.size() == 6) {
    for (std::size_t i = 0; i < 6; ++i) d[i] = hex_digit(s[i]);
  } else {
    throw bad();
  }
  if (std::any_of(d.begin(), d.end(), [](int v) { return v < 0; })) throw bad();
  return {static_cast<std::uint8_t>(d[0] * 16 + d[1]), static_cast<std::uint8_t>(d[2] * 16 + d[3]),
          static_cast<std::uint8_t>(d[4] * 16 + d[5])};
}

double relative_luminance(const Rgb& c) {
  return 0.2126 * linear(c.r) + 0.7152 * linear(c.g) + 0.0722 * linear(c.b);
}

double contrast_ratio(const Rgb& a, const Rgb& b) {
  const double la = relative_luminance(a), lb = relative_luminance(b);
  return (std::max(la, lb) + 0.05) / (std::min(la, lb) + 0.05);
}

double hue_distance(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 360.0);
  return d > 180 ? 360 - d : d;
}

}  // namespace emaviz::renderer
