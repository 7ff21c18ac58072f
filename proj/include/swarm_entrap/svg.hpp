#pragma once

// Minimal static SVG 1.1 output: a document builder, a line chart, a bar
// chart and the arena overview.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "swarm_entrap/geometry.hpp"
#include "swarm_entrap/simulator.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap::svg {

inline std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Colors cycle through this palette by series index.
inline const char* palette(std::size_t i) {
  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % (sizeof colors / sizeof colors[0])];
}

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  void raw(const std::string& element) { body_ << "  " << element << '\n'; }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0) {
    body_ << "  <line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none") {
    body_ << "  <rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke = "none") {
    body_ << "  <circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" fill=\"" << fill
          << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.0,
                double opacity = 1.0) {
    if (pts.empty()) return;
    body_ << "  <polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width)
          << "\" stroke-opacity=\"" << num(opacity) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
    body_ << "\"/>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill, const std::string& stroke) {
    body_ << "  <polygon fill=\"" << fill << "\" stroke=\"" << stroke << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
    body_ << "\"/>\n";
  }

  void text(double x, double y, const std::string& content, double size = 12.0, const std::string& anchor = "start") {
    body_ << "  <text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\" font-size=\""
          << num(size) << "\" text-anchor=\"" << anchor << "\">" << escape(content) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_) << "\" height=\""
       << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
       << "  <rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_)
       << "\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

struct Frame2D {
  double left = 70, right = 20, top = 40, bottom = 50;
  double width = 720, height = 420;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline void draw_axes(Document& doc, const Frame2D& f, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel) {
  doc.line(f.left, f.height - f.bottom, f.width - f.right, f.height - f.bottom, "black");
  doc.line(f.left, f.top, f.left, f.height - f.bottom, "black");
  for (int i = 0; i <= 5; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
    doc.line(f.px(xv), f.height - f.bottom, f.px(xv), f.height - f.bottom + 4, "black");
    doc.text(f.px(xv), f.height - f.bottom + 18, num(xv), 10, "middle");
    doc.line(f.left - 4, f.py(yv), f.left, f.py(yv), "black");
    doc.text(f.left - 6, f.py(yv) + 3, num(yv), 10, "end");
  }
  doc.text(f.width / 2, 22, title, 14, "middle");
  doc.text((f.left + f.width - f.right) / 2, f.height - 12, xlabel, 12, "middle");
  doc.raw("<text x=\"16\" y=\"" + num(f.height / 2) +
          "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
          num(f.height / 2) + ")\">" + escape(ylabel) + "</text>");
}

}  // namespace detail

inline std::string line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                              const std::vector<Series>& series) {
  detail::Frame2D f;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double x : s.x) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    for (double y : s.y)
      if (std::isfinite(y)) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  f.x0 = xmin, f.x1 = xmax;
  f.y0 = ymin - 0.05 * (ymax - ymin), f.y1 = ymax + 0.05 * (ymax - ymin);

  Document doc(f.width, f.height);
  detail::draw_axes(doc, f, title, xlabel, ylabel);
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(series[k].x.size(), series[k].y.size()); ++i)
      if (std::isfinite(series[k].y[i])) pts.emplace_back(f.px(series[k].x[i]), f.py(series[k].y[i]));
    doc.polyline(pts, palette(k), 1.2, series.size() > 4 ? 0.6 : 1.0);
    if (series.size() <= 4 && !series[k].label.empty()) {
      doc.line(f.width - f.right - 130, f.top + 14 * k + 4, f.width - f.right - 112, f.top + 14 * k + 4, palette(k), 2);
      doc.text(f.width - f.right - 108, f.top + 14 * k + 8, series[k].label, 11);
    }
  }
  return doc.str();
}

/// Grouped bars: groups[g].second[k] is the height of bar k in group g.
inline std::string bar_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                             const std::vector<std::string>& bar_labels,
                             const std::vector<std::pair<std::string, std::vector<double>>>& groups) {
  detail::Frame2D f;
  double ymax = 1.0;
  std::size_t bars = 0;
  for (const auto& g : groups) {
    bars = std::max(bars, g.second.size());
    for (double v : g.second) ymax = std::max(ymax, v);
  }
  f.x0 = 0, f.x1 = std::max<double>(1, static_cast<double>(bars));
  f.y0 = 0, f.y1 = ymax * 1.1;

  Document doc(f.width, f.height);
  doc.line(f.left, f.height - f.bottom, f.width - f.right, f.height - f.bottom, "black");
  doc.line(f.left, f.top, f.left, f.height - f.bottom, "black");
  for (int i = 0; i <= 5; ++i) {
    const double yv = f.y1 * i / 5.0;
    doc.line(f.left - 4, f.py(yv), f.left, f.py(yv), "black");
    doc.text(f.left - 6, f.py(yv) + 3, num(yv), 10, "end");
  }
  doc.text(f.width / 2, 22, title, 14, "middle");
  doc.text((f.left + f.width - f.right) / 2, f.height - 12, xlabel, 12, "middle");
  doc.text(16, f.top - 8, ylabel, 11);

  const double slot = (f.px(f.x1) - f.px(0)) / std::max<double>(1, static_cast<double>(bars));
  const double bw = slot * 0.8 / std::max<double>(1, static_cast<double>(groups.size()));
  for (std::size_t b = 0; b < bars; ++b) {
    const double x = f.px(0) + slot * static_cast<double>(b) + slot * 0.1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (b >= groups[g].second.size()) continue;
      const double v = groups[g].second[b];
      doc.rect(x + bw * static_cast<double>(g), f.py(v), bw, f.py(0) - f.py(v), palette(g));
    }
    if (b < bar_labels.size()) doc.text(x + slot * 0.4, f.height - f.bottom + 16, bar_labels[b], 10, "middle");
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    doc.rect(f.width - f.right - 130, f.top + 14 * g, 10, 10, palette(g));
    doc.text(f.width - f.right - 115, f.top + 14 * g + 9, groups[g].first, 11);
  }
  return doc.str();
}

/// Arena, obstacles, agent paths (thin) and target paths (thick), with final positions marked.
inline std::string trajectory_overview(const std::string& title, const Arena& arena,
                                       const std::vector<Obstacle>& obstacles, const Trajectory& traj) {
  const double size = 640, margin = 40;
  const double scale = (size - 2 * margin) / arena.side;
  auto px = [&](Vec2 p) { return std::pair<double, double>{margin + p.x * scale, size - margin - p.y * scale}; };

  Document doc(size, size + 20);
  doc.text(size / 2, 22, title, 14, "middle");
  doc.rect(margin, margin, arena.side * scale, arena.side * scale, "none", "black");
  for (const auto& o : obstacles) {
    if (const auto* c = std::get_if<Circle>(&o)) {
      const auto [cx, cy] = px(c->center);
      doc.circle(cx, cy, c->radius * scale, "#bbbbbb", "#555555");
    } else {
      std::vector<std::pair<double, double>> pts;
      for (Vec2 v : std::get<ConvexPolygon>(o).vertices) pts.push_back(px(v));
      doc.polygon(pts, "#bbbbbb", "#555555");
    }
  }
  if (traj.frames.empty()) return doc.str();
  const auto& last = traj.frames.back();
  for (std::size_t i = 0; i < last.agents.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& f : traj.frames) pts.push_back(px(f.agents[i].pos));
    doc.polyline(pts, palette(last.agents[i].assigned_target), 0.6, 0.5);
    const auto [x, y] = pts.back();
    doc.circle(x, y, 3, palette(last.agents[i].assigned_target));
  }
  for (std::size_t k = 0; k < last.targets.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& f : traj.frames) pts.push_back(px(f.targets[k].pos));
    doc.polyline(pts, "black", 1.8);
    const auto [x, y] = pts.back();
    doc.circle(x, y, 5, palette(k), "black");
  }
  return doc.str();
}

}  // namespace swarm_entrap::svg
