#include "banditvn/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "banditvn/error.hpp"

namespace banditvn::svg {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  double transform(double v) const { return log ? std::log10(v) : v; }
  double fraction(double v) const {
    const double a = transform(lo), b = transform(hi);
    return b > a ? (transform(v) - a) / (b - a) : 0.5;
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int first = static_cast<int>(std::ceil(std::log10(lo) - 1e-12));
      const int last = static_cast<int>(std::floor(std::log10(hi) + 1e-12));
      for (int e = first; e <= last; ++e) out.push_back(std::pow(10.0, e));
      if (out.empty()) out = {lo, hi};
      return out;
    }
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
  }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

}  // namespace

std::string render_line_chart(const csv::Table& table, const PlotOptions& options) {
  if (options.columns.empty()) throw IoError("plot: no columns requested");
  const std::vector<double> xs = table.column(options.x_column);
  std::vector<std::vector<double>> series;
  for (const auto& c : options.columns) series.push_back(table.column(c));

  Axis ax{options.log_x, std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  Axis ay{options.log_y, std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (const auto& ys : series) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!usable(xs[i], ax.log) || !usable(ys[i], ay.log)) continue;
      ax.lo = std::min(ax.lo, xs[i]);
      ax.hi = std::max(ax.hi, xs[i]);
      ay.lo = std::min(ay.lo, ys[i]);
      ay.hi = std::max(ay.hi, ys[i]);
    }
  }
  if (!(ax.lo <= ax.hi)) {
    ax.lo = ax.log ? 1.0 : 0.0;
    ax.hi = ax.log ? 10.0 : 1.0;
  }
  if (!(ay.lo <= ay.hi)) {
    ay.lo = ay.log ? 1.0 : 0.0;
    ay.hi = ay.log ? 10.0 : 1.0;
  }

  const double w = options.width, h = options.height;
  const double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double x) { return left + ax.fraction(x) * pw; };
  auto py = [&](double y) { return top + (1.0 - ay.fraction(y)) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    out += "<text x=\"" + fmt("%.1f", w / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           escape(options.title) + "</text>\n";
  }
  out += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", top) + "\" width=\"" +
         fmt("%.1f", pw) + "\" height=\"" + fmt("%.1f", ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  out += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    out += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", top + ph) + "\" x2=\"" +
           fmt("%.2f", x) + "\" y2=\"" + fmt("%.2f", top + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", top + ph + 18) +
           "\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    out += "<line x1=\"" + fmt("%.2f", left - 5) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" +
           fmt("%.2f", left) + "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.2f", left - 8) + "\" y=\"" + fmt("%.2f", y + 4) +
           "\" text-anchor=\"end\">" + fmt("%g", t) + "</text>\n";
  }
  out += "</g>\n";
  out += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"" + fmt("%.1f", h - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         escape(options.x_column) + (options.log_x ? " (log)" : "") + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % kPalette.size()];
    out += "<polyline fill=\"none\" stroke=\"";
    out += colour;
    out += "\" stroke-width=\"1.5\" data-column=\"" + escape(options.columns[s]) + "\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!usable(xs[i], ax.log) || !usable(series[s][i], ay.log)) continue;
      if (!first) out += ' ';
      out += fmt("%.2f", px(xs[i])) + "," + fmt("%.2f", py(series[s][i]));
      first = false;
    }
    out += "\"/>\n";
  }

  out += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = top + 16 + 18.0 * static_cast<double>(s);
    out += "<line x1=\"" + fmt("%.1f", left + 10) + "\" y1=\"" + fmt("%.1f", y - 4) + "\" x2=\"" +
           fmt("%.1f", left + 34) + "\" y2=\"" + fmt("%.1f", y - 4) + "\" stroke=\"" +
           kPalette[s % kPalette.size()] + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt("%.1f", left + 40) + "\" y=\"" + fmt("%.1f", y) + "\">" +
           escape(options.columns[s]) + (options.log_y ? " (log)" : "") + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

void emit_svg(const csv::Table& table, const PlotOptions& options,
              const std::filesystem::path& path) {
  csv::write_file_atomic(path, render_line_chart(table, options));
}

}  // namespace banditvn::svg
