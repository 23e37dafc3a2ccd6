#pragma once

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "blpp/grid.hpp"

namespace blpp {

// Tiny SVG writer for the level/time plane: x is time, y is the level axis
// drawn upward, so higher levels appear higher in the picture.
class SvgCanvas {
 public:
  explicit SvgCanvas(const FieldSpec& spec, double px_per_time = 4.0, double px_per_level = 6.0)
      : spec_(spec), sx_(px_per_time), sy_(px_per_level) {}

  void add_segment(double level0, double t0, double level1, double t1, const std::string& color,
                   double width) {
    seen(level0, t0);
    seen(level1, t1);
    segments_.push_back({level0, t0, level1, t1, color, width});
  }

  void add_dot(double level, double t, const std::string& color, double radius) {
    seen(level, t);
    dots_.push_back({level, t, color, radius});
  }

  // Staircase polyline of an up-right path.
  void add_path(const UpRightPath& path, const std::string& color, double width) {
    for (int k = path.start_level; k <= path.end_level(); ++k) {
      const double entry = spec_.time_at(path.entry_index(k));
      const double exit = spec_.time_at(path.exit_index(k));
      add_segment(k, entry, k, exit, color, width);
      if (k < path.end_level()) add_segment(k, exit, k + 1, exit, color, width);
    }
  }

  void write(const std::string& file) const {
    std::FILE* f = std::fopen(file.c_str(), "w");
    if (!f) throw std::runtime_error("SvgCanvas: cannot open " + file);
    const double pad = 10.0;
    const double w = (tmax_ - tmin_) * sx_ + 2 * pad;
    const double h = (lmax_ - lmin_) * sy_ + 2 * pad;
    auto px = [&](double t) { return pad + (t - tmin_) * sx_; };
    auto py = [&](double level) { return h - pad - (level - lmin_) * sy_; };
    std::fprintf(f,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                 "viewBox=\"0 0 %.0f %.0f\">\n<rect width=\"100%%\" height=\"100%%\" "
                 "fill=\"white\"/>\n",
                 w, h, w, h);
    for (const auto& s : segments_)
      std::fprintf(f,
                   "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                   "stroke-width=\"%.2f\"/>\n",
                   px(s.t0), py(s.l0), px(s.t1), py(s.l1), s.color.c_str(), s.width);
    for (const auto& d : dots_)
      std::fprintf(f, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>\n", px(d.t),
                   py(d.level), d.radius, d.color.c_str());
    std::fprintf(f, "</svg>\n");
    std::fclose(f);
  }

 private:
  struct Segment {
    double l0, t0, l1, t1;
    std::string color;
    double width;
  };
  struct Dot {
    double level, t;
    std::string color;
    double radius;
  };

  void seen(double level, double t) {
    lmin_ = std::min(lmin_, level);
    lmax_ = std::max(lmax_, level + 1e-9);
    tmin_ = std::min(tmin_, t);
    tmax_ = std::max(tmax_, t + 1e-9);
  }

  FieldSpec spec_;
  double sx_, sy_;
  double lmin_ = 0.0, lmax_ = 1.0, tmin_ = 0.0, tmax_ = 1.0;
  std::vector<Segment> segments_;
  std::vector<Dot> dots_;
};

}  // namespace blpp
