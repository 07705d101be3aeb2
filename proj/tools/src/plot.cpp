#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "report_io.hpp"

namespace smot::cli {
namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::vector<Series> series;
};

constexpr double kPanelW = 460, kPanelH = 340, kLeft = 70, kTop = 40, kPlotW = 360, kPlotH = 230;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string params_text(const std::map<std::string, double>& params, const std::string& skip = {}) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (k == skip) continue;
    out += (out.empty() ? "" : ",") + k + "=" + fmt(v);
  }
  return out;
}

std::string resolution_text(const std::vector<int>& res) {
  std::string out;
  for (int r : res) out += (out.empty() ? "" : "x") + std::to_string(r);
  return out.empty() ? "-" : out;
}

std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo) * 0.1, 1e-12);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

void draw_panel(std::ostringstream& svg, const Panel& panel, double ox) {
  svg << "<g transform=\"translate(" << ox << ",0)\">\n";
  svg << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(panel.title) << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
      << "\" fill=\"none\" stroke=\"#444\"/>\n";

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : panel.series) {
    for (const auto& [x, y] : s.points) {
      xlo = std::min(xlo, x), xhi = std::max(xhi, x);
      ylo = std::min(ylo, y), yhi = std::max(yhi, y);
    }
  }
  if (panel.series.empty()) {
    svg << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kTop + kPlotH / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"#888\">no data</text>\n</g>\n";
    return;
  }
  std::tie(xlo, xhi) = padded(xlo, xhi);
  std::tie(ylo, yhi) = padded(ylo, yhi);
  auto px = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * kPlotW; };
  auto py = [&](double y) { return kTop + kPlotH - (y - ylo) / (yhi - ylo) * kPlotH; };

  for (int i = 0; i <= 4; ++i) {
    const double xv = xlo + (xhi - xlo) * i / 4.0, yv = ylo + (yhi - ylo) * i / 4.0;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << kTop + kPlotH + 16 << "\" text-anchor=\"middle\" font-size=\"10\">"
        << fmt(xv) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 3 << "\" text-anchor=\"end\" font-size=\"10\">"
        << fmt(yv) << "</text>\n";
  }
  if (ylo < 0 && yhi > 0) {
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft + kPlotW << "\" y2=\"" << py(0)
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  svg << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kTop + kPlotH + 34
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << kTop + kPlotH / 2
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">margin</text>\n";

  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const Series& s = panel.series[k];
    const char* color = kColors[k % std::size(kColors)];
    if (s.points.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) svg << px(x) << "," << py(y) << " ";
      svg << "\"/>\n";
    }
    for (const auto& [x, y] : s.points) {
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (k < 8) {
      const double ly = kTop + kPlotH + 52 + 14 * static_cast<double>(k);
      svg << "<rect x=\"" << kLeft << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\"" << color
          << "\"/><text x=\"" << kLeft + 16 << "\" y=\"" << ly << "\" font-size=\"10\">" << escape(s.label)
          << "</text>\n";
    }
  }
  svg << "</g>\n";
}

Panel resolution_panel(const std::vector<InequalityReport>& reports) {
  Panel panel{"margin vs resolution", "resolution", {}};
  std::map<std::string, std::size_t> index;
  for (const auto& r : reports) {
    if (r.resolution.empty()) continue;
    const std::string key = r.name + " " + r.surface + " " + params_text(r.params);
    auto [it, fresh] = index.try_emplace(key, panel.series.size());
    if (fresh) panel.series.push_back({key, {}});
    panel.series[it->second].points.emplace_back(r.resolution.front(), r.margin);
  }
  for (auto& s : panel.series) std::sort(s.points.begin(), s.points.end());
  return panel;
}

Panel parameter_panel(const std::vector<InequalityReport>& reports) {
  // Group by everything except params, then pick the first key that varies.
  std::map<std::string, std::vector<const InequalityReport*>> groups;
  std::vector<std::string> order;
  for (const auto& r : reports) {
    const std::string key = r.name + " " + r.surface + " " + resolution_text(r.resolution);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  Panel panel{"margin vs parameter", "", {}};
  std::set<std::string> axes;
  for (const auto& key : order) {
    const auto& rows = groups[key];
    std::string axis;
    for (const auto& [name, value] : rows.front()->params) {
      for (const auto* r : rows) {
        const auto it = r->params.find(name);
        if (it == r->params.end() || it->second != value) {
          axis = name;
          break;
        }
      }
      if (!axis.empty()) break;
    }
    if (axis.empty() && !rows.front()->params.empty()) axis = rows.front()->params.begin()->first;
    Series s{key + (axis.empty() ? "" : " [" + axis + "]"), {}};
    for (const auto* r : rows) {
      const auto it = r->params.find(axis);
      s.points.emplace_back(it == r->params.end() ? 0.0 : it->second, r->margin);
    }
    std::sort(s.points.begin(), s.points.end());
    axes.insert(axis.empty() ? "(none)" : axis);
    panel.series.push_back(std::move(s));
  }
  for (const auto& a : axes) panel.x_label += (panel.x_label.empty() ? "" : ", ") + a;
  return panel;
}

}  // namespace

std::string render_margin_plot(const std::vector<InequalityReport>& reports) {
  if (reports.empty()) throw Error("plot: no reports to draw");
  const Panel left = resolution_panel(reports);
  const Panel right = parameter_panel(reports);
  const std::size_t legend = std::min<std::size_t>(8, std::max(left.series.size(), right.series.size()));
  const double height = kPanelH + 14.0 * static_cast<double>(legend);
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kPanelW << "\" height=\"" << height
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  draw_panel(svg, left, 0);
  draw_panel(svg, right, kPanelW);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace smot::cli
