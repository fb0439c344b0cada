#pragma once

// Static SVG sign plots: a 1D trace, a 2D raster and a Mollweide raster of
// a function on S^2. Positive cells are drawn red, negative blue.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace nodal::svg {

namespace detail {

inline const char* sign_color(double v) { return v > 0.0 ? "#c0392b" : (v < 0.0 ? "#2e86c1" : "#000000"); }

inline std::string open(int w, int h) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << ' ' << h << "\">\n";
  return s.str();
}

}  // namespace detail

/// Graph of f on [0, 1) from equally spaced samples, with the zero line.
inline std::string trace_1d(const std::vector<double>& values, int width = 800, int height = 240) {
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  std::ostringstream s;
  s << detail::open(width, height);
  const double mid = 0.5 * height;
  s << "<line x1=\"0\" y1=\"" << mid << "\" x2=\"" << width << "\" y2=\"" << mid << "\" stroke=\"#888\"/>\n";
  const std::size_t n = values.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = width * static_cast<double>(i) / n;
    const double x1 = width * static_cast<double>(i + 1) / n;
    const double y0 = mid - 0.45 * height * values[i] / vmax;
    const double y1 = mid - 0.45 * height * values[i + 1] / vmax;
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y1 << "\" stroke=\""
      << detail::sign_color(values[i] + values[i + 1]) << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

/// Sign raster of an n x n row-major grid (first index is the row), at most
/// `cells` cells per side.
inline std::string raster_2d(const std::vector<double>& values, int n, int cells = 128, int size = 512) {
  const int step = std::max(1, n / cells);
  const int m = (n + step - 1) / step;
  const double c = static_cast<double>(size) / m;
  std::ostringstream s;
  s << detail::open(size, size);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double v = values[static_cast<std::size_t>(i * step) * n + j * step];
      s << "<rect x=\"" << j * c << "\" y=\"" << (m - 1 - i) * c << "\" width=\"" << c << "\" height=\"" << c
        << "\" fill=\"" << detail::sign_color(v) << "\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

/// Mollweide-projected sign raster of f : S^2 -> R.
inline std::string mollweide(const std::function<double(std::span<const double>)>& f, int cols = 160,
                             int width = 640) {
  const int rows = cols / 2;
  const int height = width / 2;
  const double cw = static_cast<double>(width) / cols;
  const double ch = static_cast<double>(height) / rows;
  std::ostringstream s;
  s << detail::open(width, height);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // cell centre in projection coordinates x in [-2, 2], y in [-1, 1] (units of sqrt 2)
      const double px = -2.0 + 4.0 * (c + 0.5) / cols;
      const double py = 1.0 - 2.0 * (r + 0.5) / rows;
      if (px * px / 4.0 + py * py > 1.0) continue;
      const double theta = std::asin(py);
      const double lat = std::asin((2.0 * theta + std::sin(2.0 * theta)) / std::numbers::pi);
      const double lon = std::numbers::pi * px / (2.0 * std::cos(theta));
      const double p[3] = {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
      s << "<rect x=\"" << c * cw << "\" y=\"" << r * ch << "\" width=\"" << cw << "\" height=\"" << ch
        << "\" fill=\"" << detail::sign_color(f(std::span<const double>(p, 3))) << "\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace nodal::svg
