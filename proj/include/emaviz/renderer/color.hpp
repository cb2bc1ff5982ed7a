#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace emaviz::renderer {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Hue in degrees, saturation and lightness in percent.
struct Hsl {
  double h = 0, s = 0, l = 0;
};

Rgb to_rgb(const Hsl& c);
Hsl to_hsl(const Rgb& c);

/// "#rrggbb" (lower case).
std::string hex(const Rgb& c);
/// Accepts "#rgb" and "#rrggbb". Throws std::invalid_argument.
Rgb parse_hex(std::string_view s);

/// WCAG 2 relative luminance and contrast ratio.
double relative_luminance(const Rgb& c);
double contrast_ratio(const Rgb& a, const Rgb& b);

/// Shortest angular distance, 0..180.
double hue_distance(double a, double b);

}  // namespace emaviz::renderer
