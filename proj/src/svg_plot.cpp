#include "gcfx/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gcfx {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 48;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                         "#9467bd", "#ff7f0e", "#8c564b"};

std::ofstream open_svg(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::io, "analysis", "cannot write " + path);
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::string& x_label,
                   const std::vector<double>& xs,
                   const std::vector<PlotSeries>& series) {
  if (xs.size() < 2)
    throw Error(ErrorKind::argument, "analysis",
                "line plot needs at least 2 x values");
  for (const auto& s : series)
    if (s.ys.size() != xs.size())
      throw Error(ErrorKind::argument, "analysis",
                  "series \"" + s.label + "\" length does not match x axis");

  double ymin = 0.0, ymax = 0.0;
  bool any = false;
  for (const auto& s : series)
    for (double v : s.ys) {
      if (!any) {
        ymin = ymax = v;
        any = true;
      }
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (!any) ymax = 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  const double xmin = xs.front(), xmax = xs.back();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w;
  };
  const auto py = [&](double y) {
    return kMarginTop + (ymax - y) / (ymax - ymin) * plot_h;
  };

  auto out = open_svg(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"15\">"
      << escape(title) << "</text>\n";

  // axes and y ticks
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop
      << "\" x2=\"" << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h
      << "\" x2=\"" << kMarginLeft + plot_w << "\" y2=\""
      << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = ymin + (ymax - ymin) * tick / 4.0;
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << "<text x=\"" << px(xs[i]) << "\" y=\"" << kMarginTop + plot_h + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xs[i])
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
      << kHeight - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << escape(x_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << px(xs[i]) << "," << py(series[s].ys[i]) << " ";
    out << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(series[s].ys[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w - 4 << "\" y=\""
        << kMarginTop + 16 + 16 * s
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
        << escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
}

void svg_heatmap(const std::string& path, const std::string& title,
                 const Mat& grid) {
  if (grid.size() == 0)
    throw Error(ErrorKind::argument, "analysis", "empty heatmap grid");
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const double cw = plot_w / grid.cols();
  const double ch = plot_h / grid.rows();

  auto out = open_svg(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"15\">"
      << escape(title) << "</text>\n";
  for (Eigen::Index r = 0; r < grid.rows(); ++r)
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      const double v = std::clamp(grid(r, c), 0.0, 1.0);
      // white (0) to dark blue (1)
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      out << "<rect x=\"" << kMarginLeft + c * cw << "\" y=\""
          << kMarginTop + r * ch << "\" width=\"" << cw << "\" height=\"" << ch
          << "\" fill=\"rgb(" << shade << "," << shade << ",255)\"/>\n";
    }
  out << "<text x=\"" << kMarginLeft << "\" y=\"" << kHeight - 10
      << "\" font-size=\"12\">max " << fmt(grid.maxCoeff()) << ", min "
      << fmt(grid.minCoeff()) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace gcfx
