#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>

#include "corridor.hpp"

namespace corridorlab {

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

}  // namespace detail

/// One band per corridor (earliest at the bottom of the picture), one <rect>
/// per bottom edge filled by colour class, and cancellation arcs over the
/// naive top. Only cells are drawn as rects.
inline std::string render_svg(const CorridorStack& s, const Alphabet& al) {
  constexpr double kWidth = 960, kMargin = 20, kBand = 36, kGap = 44;
  constexpr int kPalette = 12;
  static const char* palette[kPalette] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
                                          "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295"};
  const std::size_t n = s.steps();
  const double height = 2 * kMargin + static_cast<double>(n) * (kBand + kGap);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(kWidth + 2 * kMargin) << "\" height=\""
     << detail::fmt(height) << "\" viewBox=\"0 0 " << detail::fmt(kWidth + 2 * kMargin) << " " << detail::fmt(height)
     << "\">\n";
  os << "<style>\n";
  for (int k = 0; k < kPalette; ++k) os << "  .c" << k << " { fill: " << palette[k] << "; }\n";
  os << "  .cell { stroke: #222; stroke-width: 0.5; }\n"
        "  .dead { fill-opacity: 0.35; }\n"
        "  .band { fill: none; stroke: #555; stroke-width: 1; }\n"
        "  .arc { fill: none; stroke: #c00; stroke-width: 0.8; }\n"
        "  text { font-family: monospace; font-size: 10px; }\n";
  os << "</style>\n";
  for (std::size_t t = 0; t < n; ++t) {
    const auto& c = s.corridors[t];
    const double y = height - kMargin - static_cast<double>(t + 1) * (kBand + kGap) + kGap;
    os << "<g class=\"corridor\" id=\"corridor-" << t << "\">\n";
    os << "  <path class=\"band\" d=\"M " << detail::fmt(kMargin) << " " << detail::fmt(y) << " H "
       << detail::fmt(kMargin + kWidth) << " V " << detail::fmt(y + kBand) << " H " << detail::fmt(kMargin)
       << " Z\"/>\n";
    os << "  <text x=\"" << detail::fmt(2) << "\" y=\"" << detail::fmt(y + kBand / 2) << "\">" << t << "</text>\n";
    const std::size_t len = c.bottom.size();
    const double w = len ? kWidth / static_cast<double>(len) : 0;
    for (std::size_t i = 0; i < len; ++i) {
      const int col = s.colour[t][i];
      os << "  <rect class=\"cell c" << (col % kPalette) << (c.died[i] ? " dead" : "") << "\" x=\""
         << detail::fmt(kMargin + w * static_cast<double>(i)) << "\" y=\"" << detail::fmt(y + kBand / 2) << "\" width=\""
         << detail::fmt(w) << "\" height=\"" << detail::fmt(kBand / 2) << "\"/>\n";
      if (w >= 10)
        os << "  <text x=\"" << detail::fmt(kMargin + w * (static_cast<double>(i) + 0.5) - 3) << "\" y=\""
           << detail::fmt(y + kBand - 5) << "\">"
           << detail::xml_escape(format_letters(std::span<const Letter>(&c.bottom.letters()[i], 1), al)) << "</text>\n";
    }
    const std::size_t naive = c.naive_top.size();
    if (naive > 0) {
      const double nw = kWidth / static_cast<double>(naive);
      for (auto [p, q] : c.cancellations) {
        const double x1 = kMargin + nw * (static_cast<double>(p) + 0.5);
        const double x2 = kMargin + nw * (static_cast<double>(q) + 0.5);
        const double rise = std::min(kGap - 4, 6 + (x2 - x1) / 4);
        os << "  <path class=\"arc\" d=\"M " << detail::fmt(x1) << " " << detail::fmt(y) << " Q "
           << detail::fmt((x1 + x2) / 2) << " " << detail::fmt(y - rise) << " " << detail::fmt(x2) << " "
           << detail::fmt(y) << "\"/>\n";
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace corridorlab
