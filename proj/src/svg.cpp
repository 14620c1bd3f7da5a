#include "kerrqfi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kerrqfi {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);
  return buf;
}

std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
  std::vector<double> ticks;
  const double span = hi - lo;
  if (span <= 0) return {lo};
  double step = std::pow(10.0, std::floor(std::log10(span / target)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (span / (step * mult) <= target) {
      step *= mult;
      break;
    }
  }
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (int e = static_cast<int>(std::floor(std::log10(lo))); std::pow(10.0, e) <= hi * (1 + 1e-12); ++e) {
    const double t = std::pow(10.0, e);
    if (t >= lo * (1 - 1e-12)) ticks.push_back(t);
  }
  if (ticks.empty()) ticks = {lo, hi};
  return ticks;
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
  if (plot.series.empty()) throw std::invalid_argument("render_svg: no series");
  for (const auto& s : plot.series)
    if (s.points.size() < 2)
      throw std::invalid_argument("render_svg: series '" + s.label +
                                  "' has fewer than 2 points (degenerate plot)");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series)
    for (const auto& p : s.points) {
      if (plot.xlog && p[0] <= 0) continue;
      xmin = std::min(xmin, p[0]);
      xmax = std::max(xmax, p[0]);
      ymin = std::min(ymin, p[1]);
      ymax = std::max(ymax, p[1]);
    }
  if (!(xmin < xmax)) xmax = xmin + 1;
  if (!(ymin < ymax)) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double ml = 70, mr = 20, mt = plot.title.empty() ? 16 : 36, mb = 48;
  const double pw = plot.width - ml - mr, ph = plot.height - mt - mb;

  auto sx = [&](double x) {
    const double u = plot.xlog ? (std::log10(x) - std::log10(xmin)) /
                                     (std::log10(xmax) - std::log10(xmin))
                               : (x - xmin) / (xmax - xmin);
    return ml + u * pw;
  };
  auto sy = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\""
     << plot.height << "\" viewBox=\"0 0 " << plot.width << " " << plot.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!plot.title.empty())
    os << "<text x=\"" << plot.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"15\">" << plot.title << "</text>\n";

  // axes
  os << "<g stroke=\"#000\" stroke-width=\"1\">\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
     << mt + ph << "\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
     << "\"/>\n</g>\n";

  const auto xticks = plot.xlog ? log_ticks(xmin, xmax) : linear_ticks(xmin, xmax);
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#000\">\n";
  for (double t : xticks) {
    const double x = sx(t);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << num(x) << "\" y2=\""
       << mt + ph + 4 << "\" stroke=\"#000\"/>\n"
       << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 17 << "\" text-anchor=\"middle\">"
       << num(t) << "</text>\n";
  }
  for (double t : linear_ticks(ymin, ymax)) {
    const double y = sy(t);
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << num(y) << "\" x2=\"" << ml << "\" y2=\""
       << num(y) << "\" stroke=\"#000\"/>\n"
       << "<text x=\"" << ml - 7 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(t)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << plot.height - 8
     << "\" text-anchor=\"middle\" font-size=\"13\">" << plot.xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << mt + ph / 2
     << ")\">" << plot.ylabel << "</text>\n</g>\n";

  for (const auto& s : plot.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (const auto& p : s.points) {
      if (plot.xlog && p[0] <= 0) continue;
      os << num(sx(p[0])) << "," << num(sy(p[1])) << " ";
    }
    os << "\"/>\n";
  }

  // legend
  double ly = mt + 14;
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& s : plot.series) {
    if (s.label.empty()) continue;
    os << "<line x1=\"" << ml + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 40 << "\" y2=\""
       << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"1.6\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
       << "<text x=\"" << ml + 46 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
    ly += 15;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_svg(const SvgPlot& plot, const std::string& path) {
  if (path.empty()) throw std::invalid_argument("write_svg: empty output path");
  const std::string body = render_svg(plot);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_svg: cannot open '" + tmp + "'");
    out << body;
    if (!out.good()) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write_svg: write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("write_svg: rename to '" + path + "' failed: " + ec.message());
  }
}

}  // namespace kerrqfi
