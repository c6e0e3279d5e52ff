#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nlslab::cli {

namespace {

const char* kPalette[] = {"#1f4e79", "#b5442c", "#3f7d3a", "#7a4f9a", "#a07a19", "#2b8a8a"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) {
      const double pad = std::max(1e-12, std::abs(lo) * 0.1);
      lo -= pad;
      hi += pad;
    }
  }
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

void header(std::ostringstream& os, int w, int h, const std::string& title, const std::string& stamp) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  os << "<text x=\"" << w - 6 << "\" y=\"" << h - 6 << "\" text-anchor=\"end\" fill=\"#888\">" << escape(stamp)
     << "</text>\n";
}

void frame(std::ostringstream& os, double x0, double y0, double x1, double y1) {
  os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 << "\" height=\"" << y1 - y0
     << "\" fill=\"none\" stroke=\"#333\"/>\n";
}

}  // namespace

std::string svg_stacked_lines(const std::string& title, const std::string& xlabel, const std::vector<Series>& series,
                              const std::string& stamp) {
  const int w = 720, panel = 110, top = 34, left = 80, right = 20;
  const int h = top + panel * static_cast<int>(series.size()) + 50;
  std::ostringstream os;
  header(os, w, h, title, stamp);
  Range xr;
  for (const auto& s : series)
    for (double x : s.x) xr.add(x);
  xr.settle();
  for (std::size_t p = 0; p < series.size(); ++p) {
    const Series& s = series[p];
    const double y0 = top + p * panel + 6, y1 = top + (p + 1) * panel - 6;
    Range yr;
    for (double y : s.y) yr.add(y);
    yr.settle();
    frame(os, left, y0, w - right, y1);
    os << "<text x=\"" << left - 6 << "\" y=\"" << y0 + 10 << "\" text-anchor=\"end\">" << num(yr.hi) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << y1 << "\" text-anchor=\"end\">" << num(yr.lo) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << (y0 + y1) / 2 + 4 << "\" text-anchor=\"end\" fill=\""
       << kPalette[p % 6] << "\">" << escape(s.name) << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[p % 6] << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << num(xr.map(s.x[i], left, w - right)) << ',' << num(yr.map(s.y[i], y1, y0)) << ' ';
    }
    os << "\"/>\n";
  }
  const double yb = top + panel * series.size() + 14;
  os << "<text x=\"" << left << "\" y=\"" << yb << "\">" << num(xr.lo) << "</text>\n";
  os << "<text x=\"" << w - right << "\" y=\"" << yb << "\" text-anchor=\"end\">" << num(xr.hi) << "</text>\n";
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << yb + 14 << "\" text-anchor=\"middle\">"
     << escape(xlabel) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, const std::vector<double>& slopes, const std::string& stamp) {
  const int w = 560, h = 440, left = 80, right = 20, top = 34, bottom = 60;
  std::ostringstream os;
  header(os, w, h, title, stamp);
  Range xr, yr;
  for (const auto& s : series) {
    for (double x : s.x)
      if (x > 0) xr.add(std::log10(x));
    for (double y : s.y)
      if (y > 0) yr.add(std::log10(y));
  }
  xr.settle();
  yr.settle();
  frame(os, left, top, w - right, h - bottom);
  for (int d = static_cast<int>(std::ceil(yr.lo)); d <= static_cast<int>(std::floor(yr.hi)); ++d) {
    const double y = yr.map(d, h - bottom, top);
    os << "<line x1=\"" << left << "\" x2=\"" << w - right << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
       << "\" stroke=\"#ddd\"/>\n<text x=\"" << left - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e"
       << d << "</text>\n";
  }
  os << "<text x=\"" << left << "\" y=\"" << h - bottom + 14 << "\">" << num(std::pow(10, xr.lo)) << "</text>\n";
  os << "<text x=\"" << w - right << "\" y=\"" << h - bottom + 14 << "\" text-anchor=\"end\">"
     << num(std::pow(10, xr.hi)) << "</text>\n";
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - bottom + 30 << "\" text-anchor=\"middle\">"
     << escape(xlabel) << "</text>\n";
  os << "<text x=\"14\" y=\"" << (top + h - bottom) / 2 << "\" transform=\"rotate(-90 14 " << (top + h - bottom) / 2
     << ")\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
  for (std::size_t p = 0; p < series.size(); ++p) {
    const Series& s = series[p];
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      os << "<circle cx=\"" << num(xr.map(std::log10(s.x[i]), left, w - right)) << "\" cy=\""
         << num(yr.map(std::log10(s.y[i]), h - bottom, top)) << "\" r=\"4\" fill=\"" << kPalette[p % 6] << "\"/>\n";
    }
    std::string label = s.name;
    if (p < slopes.size() && std::isfinite(slopes[p])) label += "  slope " + num(slopes[p]);
    os << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 14 * p << "\" fill=\"" << kPalette[p % 6] << "\">"
       << escape(label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heatmap(const std::string& title, const std::vector<int>& rows, const std::vector<int>& cols,
                        const std::vector<std::vector<double>>& values, const std::string& stamp) {
  const int cell = 44, left = 70, top = 50;
  const int w = left + cell * static_cast<int>(cols.size()) + 140, h = top + cell * static_cast<int>(rows.size()) + 60;
  std::ostringstream os;
  header(os, w, h, title, stamp);
  Range r;
  for (const auto& row : values)
    for (double v : row) r.add(v);
  r.settle();
  os << "<defs><pattern id=\"nan\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
        "<path d=\"M0,6 L6,0\" stroke=\"#999\"/></pattern></defs>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << "<text x=\"" << left - 8 << "\" y=\"" << top + cell * i + cell / 2 + 4 << "\" text-anchor=\"end\">"
       << rows[i] << "</text>\n";
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double v = i < values.size() && j < values[i].size() ? values[i][j] : std::nan("");
      std::string fill = "url(#nan)";
      if (std::isfinite(v)) {
        const double t = std::clamp(r.map(v, 0, 1), 0.0, 1.0);
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 - 180 * t), static_cast<int>(245 - 150 * t),
                      static_cast<int>(235 - 60 * t));
        fill = buf;
      }
      os << "<rect x=\"" << left + cell * j << "\" y=\"" << top + cell * i << "\" width=\"" << cell << "\" height=\""
         << cell << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
      if (std::isfinite(v))
        os << "<text x=\"" << left + cell * j + cell / 2 << "\" y=\"" << top + cell * i + cell / 2 + 4
           << "\" text-anchor=\"middle\" font-size=\"9\">" << num(v) << "</text>\n";
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j)
    os << "<text x=\"" << left + cell * j + cell / 2 << "\" y=\"" << top - 6 << "\" text-anchor=\"middle\">"
       << cols[j] << "</text>\n";
  os << "<text x=\"" << left - 40 << "\" y=\"" << top - 6 << "\">k1 \\ k2</text>\n";
  os << "<text x=\"" << left + cell * cols.size() + 10 << "\" y=\"" << top + 12 << "\">min " << num(r.lo)
     << "</text>\n<text x=\"" << left + cell * cols.size() + 10 << "\" y=\"" << top + 28 << "\">max " << num(r.hi)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace nlslab::cli
