#include "exlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace exlab {

namespace {

constexpr double kW = 800, kH = 500, kMargin = 60;

struct Canvas {
  std::ostringstream body;
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kMargin + (x - x_min) / (x_max - x_min) * (kW - 2 * kMargin);
  }
  double py(double y) const {
    return kH - kMargin - (y - y_min) / (y_max - y_min) * (kH - 2 * kMargin);
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void write_frame(const std::string& path, const Canvas& c, const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n"
      // axes
      << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\""
      << kW - kMargin << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n"
      // corner labels
      << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(c.x_min) << "</text>\n"
      << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << num(c.x_max) << "</text>\n"
      << "<text x=\"" << kMargin - 6 << "\" y=\"" << kH - kMargin
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << num(c.y_min) << "</text>\n"
      << "<text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << num(c.y_max) << "</text>\n"
      << c.body.str() << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void svg_bar_chart(const std::string& path, const WealthDistribution& p,
                   const std::string& title) {
  Canvas c{{}, p.window_min() - 0.5, p.window_max() + 0.5, 0.0, 0.0};
  for (int n = p.window_min(); n <= p.window_max(); ++n)
    c.y_max = std::max(c.y_max, p.prob(n));
  if (c.y_max <= 0) c.y_max = 1;

  const double bar = (kW - 2 * kMargin) / p.size();
  for (int n = p.window_min(); n <= p.window_max(); ++n) {
    const double v = std::max(0.0, p.prob(n));
    const double top = c.py(v);
    c.body << "<rect x=\"" << num(c.px(n - 0.5) + 0.5) << "\" y=\"" << num(top)
           << "\" width=\"" << num(std::max(1.0, bar - 1)) << "\" height=\""
           << num(kH - kMargin - top) << "\" fill=\"steelblue\"/>\n";
  }
  write_frame(path, c, title);
}

void svg_line_chart(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& title,
                    bool log_y) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("line chart needs matching nonempty series");
  std::vector<double> x, y;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (log_y && !(ys[i] > 0)) continue;
    x.push_back(xs[i]);
    y.push_back(log_y ? std::log10(ys[i]) : ys[i]);
  }
  if (x.empty()) throw std::invalid_argument("no plottable points");

  Canvas c{{}, x.front(), x.front(), y.front(), y.front()};
  for (size_t i = 0; i < x.size(); ++i) {
    c.x_min = std::min(c.x_min, x[i]);
    c.x_max = std::max(c.x_max, x[i]);
    c.y_min = std::min(c.y_min, y[i]);
    c.y_max = std::max(c.y_max, y[i]);
  }
  if (c.x_max == c.x_min) c.x_max = c.x_min + 1;
  if (c.y_max == c.y_min) c.y_max = c.y_min + 1;

  c.body << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < x.size(); ++i)
    c.body << num(c.px(x[i])) << ',' << num(c.py(y[i])) << ' ';
  c.body << "\"/>\n";
  write_frame(path, c, log_y ? title + " (log10 y)" : title);
}

}  // namespace exlab
