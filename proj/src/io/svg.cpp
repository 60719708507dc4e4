#include "coptrack/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "coptrack/io/csv.hpp"

namespace coptrack::io {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

// Rounds the tick step to 1/2/5 * 10^n.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step;
  if (norm <= 1.5) {
    step = 1.0;
  } else if (norm <= 3.5) {
    step = 2.0;
  } else if (norm <= 7.5) {
    step = 5.0;
  } else {
    step = 10.0;
  }
  return step * mag;
}

std::string trim_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

LineChart::LineChart(std::string title, std::string x_label, std::string y_label, int width,
                     int height)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)),
      width_(width),
      height_(height) {}

void LineChart::add_series(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& color, const std::string& dash,
                           const std::string& label, double stroke_width) {
  if (x.size() != y.size()) throw std::invalid_argument("LineChart: x/y size mismatch");
  series_.push_back({x, y, color, dash, label, stroke_width});
}

void LineChart::add_region(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& fill, double opacity, const std::string& label) {
  if (x.size() != y.size()) throw std::invalid_argument("LineChart: x/y size mismatch");
  regions_.push_back({x, y, fill, label, opacity});
}

void LineChart::add_vline(double x, const std::string& color, const std::string& dash,
                          const std::string& label) {
  vlines_.push_back({x, color, dash, label});
}

void LineChart::include_x(double x) {
  if (!has_extra_x_) {
    extra_x_lo_ = extra_x_hi_ = x;
    has_extra_x_ = true;
  } else {
    extra_x_lo_ = std::min(extra_x_lo_, x);
    extra_x_hi_ = std::max(extra_x_hi_, x);
  }
}

void LineChart::include_y(double y) {
  if (!has_extra_y_) {
    extra_y_lo_ = extra_y_hi_ = y;
    has_extra_y_ = true;
  } else {
    extra_y_lo_ = std::min(extra_y_lo_, y);
    extra_y_hi_ = std::max(extra_y_hi_, y);
  }
}

void LineChart::write(const std::filesystem::path& path) const {
  Range rx, ry;
  for (const auto& s : series_) {
    for (double v : s.x) rx.include(v);
    for (double v : s.y) ry.include(v);
  }
  for (const auto& r : regions_) {
    for (double v : r.x) rx.include(v);
    for (double v : r.y) ry.include(v);
  }
  for (const auto& l : vlines_) rx.include(l.x);
  if (has_extra_x_) {
    rx.include(extra_x_lo_);
    rx.include(extra_x_hi_);
  }
  if (has_extra_y_) {
    ry.include(extra_y_lo_);
    ry.include(extra_y_hi_);
  }
  if (!rx.valid()) rx = {0.0, 1.0};
  if (!ry.valid()) ry = {0.0, 1.0};
  if (rx.hi == rx.lo) {
    rx.lo -= 0.5;
    rx.hi += 0.5;
  }
  if (ry.hi == ry.lo) {
    ry.lo -= 0.5;
    ry.hi += 0.5;
  }
  const double pad_y = 0.06 * (ry.hi - ry.lo);
  ry.lo -= pad_y;
  ry.hi += pad_y;

  const double ml = 72, mr = 18, mt = 36, mb = 52;
  const double pw = width_ - ml - mr;
  const double ph = height_ - mt - mb;
  auto sx = [&](double x) { return ml + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
    << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width_ / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\""
    << " font-size=\"14\">" << title_ << "</text>\n";

  for (const auto& r : regions_) {
    o << "<polygon fill=\"" << r.fill << "\" fill-opacity=\"" << r.opacity
      << "\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      o << trim_number(sx(r.x[i])) << ',' << trim_number(sy(r.y[i])) << ' ';
    }
    o << "\"/>\n";
  }

  // grid + ticks
  const double xstep = nice_step(rx.hi - rx.lo, 6);
  const double ystep = nice_step(ry.hi - ry.lo, 6);
  o << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double x = std::ceil(rx.lo / xstep) * xstep; x <= rx.hi + 1e-12 * xstep; x += xstep) {
    o << "<line x1=\"" << trim_number(sx(x)) << "\" y1=\"" << mt << "\" x2=\""
      << trim_number(sx(x)) << "\" y2=\"" << mt + ph << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << trim_number(sx(x)) << "\" y=\"" << mt + ph + 16
      << "\" text-anchor=\"middle\">" << trim_number(x) << "</text>\n";
  }
  for (double y = std::ceil(ry.lo / ystep) * ystep; y <= ry.hi + 1e-12 * ystep; y += ystep) {
    o << "<line x1=\"" << ml << "\" y1=\"" << trim_number(sy(y)) << "\" x2=\"" << ml + pw
      << "\" y2=\"" << trim_number(sy(y)) << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << trim_number(sy(y) + 4)
      << "\" text-anchor=\"end\">" << trim_number(y) << "</text>\n";
  }
  o << "</g>\n";

  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#333\"/>\n";
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height_ - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label_
    << "</text>\n";
  o << "<text x=\"18\" y=\"" << mt + ph / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
    << mt + ph / 2 << ")\">" << y_label_ << "</text>\n";

  for (const auto& l : vlines_) {
    o << "<line x1=\"" << trim_number(sx(l.x)) << "\" y1=\"" << mt << "\" x2=\""
      << trim_number(sx(l.x)) << "\" y2=\"" << mt + ph << "\" stroke=\"" << l.color
      << "\" stroke-dasharray=\"" << l.dash << "\"/>\n";
  }

  for (const auto& s : series_) {
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.stroke_width
      << "\"";
    if (!s.dash.empty()) o << " stroke-dasharray=\"" << s.dash << "\"";
    o << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << trim_number(sx(s.x[i])) << ',' << trim_number(sy(s.y[i])) << ' ';
    }
    o << "\"/>\n";
  }

  // legend for labelled items
  double ly = mt + 14;
  auto legend_entry = [&](const std::string& color, const std::string& dash,
                          const std::string& label, bool filled) {
    if (label.empty()) return;
    const double lx = ml + pw - 150;
    if (filled) {
      o << "<rect x=\"" << lx << "\" y=\"" << ly - 8 << "\" width=\"22\" height=\"8\" fill=\""
        << color << "\" fill-opacity=\"0.4\"/>\n";
    } else {
      o << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
      if (!dash.empty()) o << " stroke-dasharray=\"" << dash << "\"";
      o << "/>\n";
    }
    o << "<text x=\"" << lx + 28 << "\" y=\"" << ly
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
    ly += 16;
  };
  for (const auto& r : regions_) legend_entry(r.fill, "", r.label, true);
  for (const auto& s : series_) legend_entry(s.color, s.dash, s.label, false);
  for (const auto& l : vlines_) legend_entry(l.color, l.dash, l.label, false);

  o << "</svg>\n";
  write_file_atomic(path, o.str());
}

}  // namespace coptrack::io
