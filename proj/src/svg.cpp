#include "pepca/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "pepca/errors.hpp"

namespace pepca {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 170.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 50.0;
constexpr double kPlotW = kWidth - kMarginLeft - kMarginRight;
constexpr double kPlotH = kHeight - kMarginTop - kMarginBottom;

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

struct Range {
  double lo;
  double hi;
};

// data range padded by 5% per side; degenerate ranges widen to +-1
Range padded_range(double lo, double hi) {
  if (lo == hi) return {lo - 1.0, hi + 1.0};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::vector<double> nice_ticks(const Range& r, int target = 5) {
  const double raw = (r.hi - r.lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
  std::vector<double> ticks;
  for (double t = std::ceil(r.lo / step) * step; t <= r.hi + step * 1e-9; t += step)
    ticks.push_back(t == 0.0 ? 0.0 : t);  // collapse -0
  return ticks;
}

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
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

std::string render_scatter_svg(const Embedding& e, const LabelTable& labels,
                               const std::string& manifest_json) {
  if (e.dim() < 2)
    throw std::invalid_argument("scatter plot needs an embedding with at least two columns");

  std::set<std::string> distinct;  // sorted label order drives the palette
  for (const std::string& id : e.ids()) {
    const auto it = labels.find(id);
    if (it == labels.end()) throw DataError("no label for subject '" + id + "'");
    distinct.insert(it->second);
  }
  std::vector<std::string> ordered(distinct.begin(), distinct.end());
  auto color_of = [&](const std::string& label) {
    const auto at = std::lower_bound(ordered.begin(), ordered.end(), label);
    return kPalette[static_cast<std::size_t>(at - ordered.begin()) % kPalette.size()];
  };

  const Range rx = padded_range(e.points().col(0).minCoeff(), e.points().col(0).maxCoeff());
  const Range ry = padded_range(e.points().col(1).minCoeff(), e.points().col(1).maxCoeff());
  auto px = [&](double x) { return kMarginLeft + (x - rx.lo) / (rx.hi - rx.lo) * kPlotW; };
  auto py = [&](double y) { return kMarginTop + kPlotH - (y - ry.lo) / (ry.hi - ry.lo) * kPlotH; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  if (!manifest_json.empty()) svg += "<desc>" + escape_xml(manifest_json) + "</desc>\n";
  svg += "<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  svg += "<rect x=\"" + fmt("%.2f", kMarginLeft) + "\" y=\"" + fmt("%.2f", kMarginTop) +
         "\" width=\"" + fmt("%.2f", kPlotW) + "\" height=\"" + fmt("%.2f", kPlotH) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (const double t : nice_ticks(rx)) {
    const std::string x = fmt("%.2f", px(t));
    svg += "<line x1=\"" + x + "\" y1=\"" + fmt("%.2f", kMarginTop + kPlotH) + "\" x2=\"" + x +
           "\" y2=\"" + fmt("%.2f", kMarginTop + kPlotH + 5.0) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + fmt("%.2f", kMarginTop + kPlotH + 18.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt("%g", t) + "</text>\n";
  }
  for (const double t : nice_ticks(ry)) {
    const std::string y = fmt("%.2f", py(t));
    svg += "<line x1=\"" + fmt("%.2f", kMarginLeft - 5.0) + "\" y1=\"" + y + "\" x2=\"" +
           fmt("%.2f", kMarginLeft) + "\" y2=\"" + y +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", kMarginLeft - 8.0) + "\" y=\"" + fmt("%.2f", py(t) + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fmt("%g", t) +
           "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", kMarginLeft + kPlotW / 2.0) + "\" y=\"" +
         fmt("%.2f", static_cast<double>(kHeight) - 12.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">pc1</text>\n";
  svg += "<text x=\"18.00\" y=\"" + fmt("%.2f", kMarginTop + kPlotH / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         fmt("%g", kMarginTop + kPlotH / 2.0) + ")\">pc2</text>\n";

  for (Eigen::Index i = 0; i < e.count(); ++i) {
    const std::string& label = labels.at(e.ids()[static_cast<std::size_t>(i)]);
    svg += "<circle cx=\"" + fmt("%.2f", px(e.points()(i, 0))) + "\" cy=\"" +
           fmt("%.2f", py(e.points()(i, 1))) + "\" r=\"3\" fill=\"" + color_of(label) + "\"/>\n";
  }

  const double legend_x = kMarginLeft + kPlotW + 20.0;
  double legend_y = kMarginTop + 10.0;
  svg += "<g id=\"legend\">\n";
  for (const std::string& label : ordered) {
    svg += "<g class=\"entry\"><rect x=\"" + fmt("%.2f", legend_x) + "\" y=\"" +
           fmt("%.2f", legend_y) + "\" width=\"10\" height=\"10\" fill=\"" + color_of(label) +
           "\"/><text x=\"" + fmt("%.2f", legend_x + 16.0) + "\" y=\"" +
           fmt("%.2f", legend_y + 9.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(label) +
           "</text></g>\n";
    legend_y += 18.0;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void plot_svg(const Embedding& e, const LabelTable& labels, const std::filesystem::path& path,
              const std::string& manifest_json) {
  const std::string svg = render_scatter_svg(e, labels, manifest_json);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << svg;
  if (!out) throw DataError("failed while writing '" + path.string() + "'");
}

}  // namespace pepca
