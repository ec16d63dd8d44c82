#include "hsbi/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hsbi {

namespace {

constexpr double kW = 720.0, kH = 480.0, kMargin = 50.0;

std::string svg_open(double w = kW, double h = kH) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return s.str();
}

std::string color_of(int index) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[index % 8];
}

struct Axis {
  double lo = 0.0, hi = 1.0, px0 = 0.0, px1 = 1.0;
  double map(double v) const {
    return px0 + (v - lo) / (hi - lo + 1e-300) * (px1 - px0);
  }
};

void text(std::ostringstream& s, double x, double y, const std::string& t,
          int size = 12) {
  s << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
    << "\" font-family=\"sans-serif\">" << t << "</text>\n";
}

void polyline(std::ostringstream& s, const Axis& ax, const Axis& ay,
              const std::vector<double>& x, const std::vector<double>& y,
              const std::string& color) {
  s << "<polyline fill=\"none\" stroke=\"" << color
    << "\" stroke-width=\"1.2\" points=\"";
  for (size_t i = 0; i < x.size(); ++i)
    s << ax.map(x[i]) << ',' << ay.map(y[i]) << ' ';
  s << "\"/>\n";
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

}  // namespace

std::string svg_rupture_contours(const RuptureTimeMap& map, double interval) {
  if (!(interval > 0.0))
    throw std::invalid_argument("plot: contour interval must be > 0");
  std::ostringstream s;
  s << svg_open();
  text(s, kMargin, 24, "rupture front, contours every " + fmt(interval) + " s",
       14);
  const double tmax = map.max_time();
  Axis ax{0.0, double(std::max(map.ni - 1, 1)), kMargin, kW - kMargin};
  Axis ay{0.0, double(std::max(map.nk - 1, 1)), kH - kMargin, kMargin};
  s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
    << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  if (!std::isnan(tmax)) {
    auto value = [&](int i, int k) { return map.time[std::int64_t(k) * map.ni + i]; };
    int level_index = 0;
    for (double level = interval; level <= tmax; level += interval, ++level_index) {
      std::ostringstream seg;
      for (int k = 0; k + 1 < map.nk; ++k) {
        for (int i = 0; i + 1 < map.ni; ++i) {
          const double c[4] = {value(i, k), value(i + 1, k), value(i + 1, k + 1),
                               value(i, k + 1)};
          if (std::isnan(c[0]) || std::isnan(c[1]) || std::isnan(c[2]) ||
              std::isnan(c[3]))
            continue;
          // marching squares: edge crossings of the level set
          const double ex[4] = {double(i), double(i + 1), double(i + 1),
                                double(i)};
          const double ey[4] = {double(k), double(k), double(k + 1),
                                double(k + 1)};
          std::vector<std::pair<double, double>> pts;
          for (int e = 0; e < 4; ++e) {
            const int a = e, b = (e + 1) % 4;
            if ((c[a] < level) == (c[b] < level)) continue;
            const double w = (level - c[a]) / (c[b] - c[a]);
            pts.emplace_back(ex[a] + w * (ex[b] - ex[a]),
                             ey[a] + w * (ey[b] - ey[a]));
          }
          for (size_t p = 0; p + 1 < pts.size(); p += 2)
            seg << "<line x1=\"" << ax.map(pts[p].first) << "\" y1=\""
                << ay.map(pts[p].second) << "\" x2=\""
                << ax.map(pts[p + 1].first) << "\" y2=\""
                << ay.map(pts[p + 1].second) << "\"/>\n";
        }
      }
      const std::string body = seg.str();
      if (!body.empty())
        s << "<g stroke=\"" << color_of(level_index)
          << "\" stroke-width=\"1\">\n"
          << body << "</g>\n";
    }
  }
  text(s, kW / 2 - 30, kH - 12, "along strike");
  s << "</svg>\n";
  return s.str();
}

std::string svg_station_series(const std::vector<StationSeries>& stations) {
  const double panel_h = 160.0;
  const double h = kMargin + panel_h * std::max<size_t>(stations.size(), 1);
  std::ostringstream s;
  s << svg_open(kW, h);
  double y0 = 30.0;
  for (const auto& st : stations) {
    const auto rate = st.rate_magnitude();
    Axis ax{st.t.empty() ? 0.0 : st.t.front(),
            st.t.empty() ? 1.0 : st.t.back(), kMargin, kW - kMargin};
    text(s, kMargin, y0, "station " + st.name + ": shear stress (blue), slip rate (red)");
    // each curve normalized to its own band inside the panel
    auto band = [&](const std::vector<double>& y, const std::string& color,
                    double top) {
      if (y.empty()) return;
      const double lo = *std::min_element(y.begin(), y.end());
      const double hi = *std::max_element(y.begin(), y.end());
      Axis ay{lo, hi == lo ? lo + 1.0 : hi, top + 55.0, top + 8.0};
      polyline(s, ax, ay, st.t, y, color);
      text(s, kW - kMargin + 2, top + 12, fmt(hi), 9);
      text(s, kW - kMargin + 2, top + 55, fmt(lo), 9);
    };
    band(st.sigma12, "#1f77b4", y0);
    band(rate, "#d62728", y0 + 60.0);
    y0 += panel_h;
  }
  text(s, kW / 2 - 20, h - 8, "time [s]");
  s << "</svg>\n";
  return s.str();
}

std::string svg_spacetime(const FieldData& strike_line) {
  if (strike_line.dims.size() != 2)
    throw std::invalid_argument("plot: space-time input must be 2D");
  const std::int64_t rows = strike_line.dims[0], cols = strike_line.dims[1];
  std::ostringstream s;
  s << svg_open();
  text(s, kMargin, 24, "slip rate along strike over time", 14);
  const double vmax = strike_line.data.empty()
                          ? 0.0
                          : *std::max_element(strike_line.data.begin(),
                                              strike_line.data.end());
  // block-maximum downsample to keep the file small
  const std::int64_t br = std::max<std::int64_t>(1, rows / 200);
  const std::int64_t bc = std::max<std::int64_t>(1, cols / 200);
  const std::int64_t nr = (rows + br - 1) / br, nc = (cols + bc - 1) / bc;
  const double cw = (kW - 2 * kMargin) / double(nc);
  const double ch = (kH - 2 * kMargin) / double(nr);
  for (std::int64_t R = 0; R < nr; ++R) {
    for (std::int64_t C = 0; C < nc; ++C) {
      double v = 0.0;
      for (std::int64_t r = R * br; r < std::min(rows, (R + 1) * br); ++r)
        for (std::int64_t c = C * bc; c < std::min(cols, (C + 1) * bc); ++c)
          v = std::max(v, strike_line.data[size_t(r * cols + c)]);
      if (!(v > 0.0) || !(vmax > 0.0)) continue;
      const int shade = int(255.0 * (1.0 - v / vmax));
      s << "<rect x=\"" << kMargin + double(C) * cw << "\" y=\""
        << kH - kMargin - double(R + 1) * ch << "\" width=\"" << cw + 0.5
        << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb(255," << shade << ','
        << shade << ")\"/>\n";
    }
  }
  s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
    << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  text(s, kW / 2 - 30, kH - 12, "along strike");
  text(s, 8, kH / 2, "time");
  s << "</svg>\n";
  return s.str();
}

std::string svg_scaling(const BenchResult& b) {
  std::ostringstream s;
  s << svg_open();
  // left panel: FE cost vs strip thickness (linear axes)
  Axis ax1{0.0, b.n2.empty() ? 1.0 : double(b.n2.back()), kMargin,
           kW / 2 - 30};
  const double fe_max = b.fe_seconds.empty()
                            ? 1.0
                            : *std::max_element(b.fe_seconds.begin(),
                                                b.fe_seconds.end());
  Axis ay1{0.0, fe_max, kH - kMargin, kMargin + 20};
  text(s, kMargin, 24, "FE step vs layers (R2 " + fmt(b.fe_r2) + ")");
  std::vector<double> n2d(b.n2.begin(), b.n2.end());
  polyline(s, ax1, ay1, n2d, b.fe_seconds, "#1f77b4");
  for (size_t i = 0; i < n2d.size(); ++i)
    s << "<circle cx=\"" << ax1.map(n2d[i]) << "\" cy=\""
      << ay1.map(b.fe_seconds[i]) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";

  // right panel: FE and SBI cost vs in-plane size (log-log)
  auto logs = [](const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(std::log10(std::max(x, 1e-300)));
    return out;
  };
  std::vector<double> sizes(b.n1n3.begin(), b.n1n3.end());
  const auto lx = logs(sizes);
  if (!lx.empty()) {
    auto ly_fe = logs(b.fe_n1n3_seconds);
    auto ly_sbi = logs(b.sbi_n1n3_seconds);
    double lo = 1e300, hi = -1e300;
    for (double v : ly_fe) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : ly_sbi) lo = std::min(lo, v), hi = std::max(hi, v);
    Axis ax2{lx.front(), lx.back(), kW / 2 + 30, kW - kMargin};
    Axis ay2{lo, hi, kH - kMargin, kMargin + 20};
    text(s, kW / 2 + 30, 24,
         "per-step cost vs N1N3 (FE slope " + fmt(b.fe_n1n3_slope) +
             ", SBI slope " + fmt(b.sbi_n1n3_slope) + ")");
    polyline(s, ax2, ay2, lx, ly_fe, "#1f77b4");
    polyline(s, ax2, ay2, lx, ly_sbi, "#d62728");
  }
  text(s, kW / 2 + 30, 40, "SBI/layer ratio " + fmt(b.sbi_to_layer_ratio));
  s << "</svg>\n";
  return s.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("plot: write failed for " + path);
}

}  // namespace hsbi
