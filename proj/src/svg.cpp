#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polariton/workbench.hpp"

namespace polariton {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kMargin = 60;

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void include(double v) {
    if (std::isnan(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return hi > lo ? hi - lo : 1.0; }
};

Range range_of(const std::vector<double>& v) {
  Range r{1e300, -1e300};
  for (double x : v) r.include(x);
  if (r.lo > r.hi) r = {0.0, 1.0};
  return r;
}

std::string color(double u) {
  // dark blue -> teal -> yellow
  u = std::clamp(u, 0.0, 1.0);
  const double r = u < 0.5 ? 40 + 2 * u * 20 : 60 + (u - 0.5) * 2 * 190;
  const double g = 30 + u * 200;
  const double b = u < 0.5 ? 120 + u * 40 : 140 - (u - 0.5) * 2 * 110;
  std::ostringstream s;
  s << "rgb(" << int(r) << ',' << int(g) << ',' << int(b) << ')';
  return s.str();
}

class Canvas {
 public:
  explicit Canvas(std::string title) : title_(std::move(title)) {}

  double px(double x) const { return kMargin + (x - xr.lo) / xr.span() * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - yr.lo) / yr.span() * (kHeight - 2 * kMargin); }

  void polyline(const std::vector<double>& x, const std::vector<double>& y, const std::string& stroke) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!std::isnan(y[i])) body_ << px(x[i]) << ',' << py(y[i]) << ' ';
    body_ << "\"/>\n";
  }

  void cell(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << px(x) << "\" y=\"" << py(y + h) << "\" width=\"" << std::max(0.5, px(x + w) - px(x))
          << "\" height=\"" << std::max(0.5, py(y) - py(y + h)) << "\" fill=\"" << fill << "\"/>\n";
  }

  void legend(int index, const std::string& text, const std::string& stroke) {
    body_ << "<text x=\"" << kWidth - kMargin - 110 << "\" y=\"" << kMargin + 14 * index
          << "\" font-size=\"11\" fill=\"" << stroke << "\">" << text << "</text>\n";
  }

  std::string render(const std::string& xlabel, const std::string& ylabel) const {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title_ << "</text>\n"
      << body_.str() << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << xlabel << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    auto tick = [&](double v) {
      std::ostringstream t;
      t.precision(3);
      t << v;
      return t.str();
    };
    s << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 14 << "\" font-size=\"10\">" << tick(xr.lo)
      << "</text>\n<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 14
      << "\" font-size=\"10\" text-anchor=\"end\">" << tick(xr.hi) << "</text>\n<text x=\"" << kMargin - 4
      << "\" y=\"" << kHeight - kMargin << "\" font-size=\"10\" text-anchor=\"end\">" << tick(yr.lo)
      << "</text>\n<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 8
      << "\" font-size=\"10\" text-anchor=\"end\">" << tick(yr.hi) << "</text>\n</svg>\n";
    return s.str();
  }

  Range xr;
  Range yr;

 private:
  std::string title_;
  std::ostringstream body_;
};

const char* kPalette[] = {"#1f4e99", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#7f8c8d"};

std::vector<double> column(const Table& t, std::size_t c) {
  std::vector<double> v;
  for (const auto& row : t.rows) v.push_back(row.at(c));
  return v;
}

std::string line_chart(const Table& t, const std::string& title, const std::string& ylabel) {
  Canvas canvas(title);
  const auto x = column(t, 0);
  canvas.xr = range_of(x);
  Range y{1e300, -1e300};
  for (std::size_t c = 1; c < t.columns.size(); ++c)
    for (double v : column(t, c)) y.include(v);
  if (y.lo > y.hi) y = {0.0, 1.0};
  canvas.yr = y;
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const char* stroke = kPalette[(c - 1) % 7];
    canvas.polyline(x, column(t, c), stroke);
    canvas.legend(static_cast<int>(c), t.columns[c], stroke);
  }
  return canvas.render(t.columns[0], ylabel);
}

// Long-form (x, y, value) table drawn as colored cells.
std::string heat_map(const Table& t, const std::string& title) {
  Canvas canvas(title);
  const auto x = column(t, 0);
  const auto y = column(t, 1);
  const auto v = column(t, 2);
  canvas.xr = range_of(x);
  canvas.yr = range_of(y);
  const Range vr = range_of(v);

  auto step = [](std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    double s = 1e300;
    for (std::size_t i = 1; i < values.size(); ++i) s = std::min(s, values[i] - values[i - 1]);
    return values.size() > 1 ? s : 1.0;
  };
  const double dx = step(x);
  const double dy = step(y);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isnan(v[i])) canvas.cell(x[i] - dx / 2, y[i] - dy / 2, dx, dy, color((v[i] - vr.lo) / vr.span()));
  return canvas.render(t.columns[0], t.columns[1]);
}

std::filesystem::path write_svg(const std::filesystem::path& path, const std::string& svg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << svg;
  return path;
}

}  // namespace

std::vector<std::filesystem::path> render_run(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir.string());
  nlohmann::json manifest;
  in >> manifest;
  const std::string figure = manifest.at("figure").get<std::string>();
  const std::string config = manifest.at("config").at("cavity").at("configuration").get<std::string>();

  std::vector<std::filesystem::path> out;
  auto load = [&](const std::string& name) { return read_table_csv(dir / (name + ".csv")); };

  if (figure == "orientation_vs_bandwidth") {
    Table heat = load("orientation_heatmap");
    // |<cos theta>| with time on the vertical axis
    Table swapped{"", {"dw_over_g", "t_tau0", "abs_cos_theta"}, {}};
    for (const auto& r : heat.rows) swapped.rows.push_back({r[0], r[1], std::abs(r[2])});
    out.push_back(write_svg(dir / "orientation_heatmap.svg", heat_map(swapped, "|<cos theta>| (" + config + ")")));
    Table summary = load("max_orientation");
    Table max_only{"", {"dw_over_g", "max_cos_theta"}, {}};
    for (const auto& r : summary.rows) max_only.rows.push_back({r[0], r[1]});
    out.push_back(write_svg(dir / "max_orientation.svg", line_chart(max_only, "post-pulse maximum", "max |<cos theta>|")));
  } else if (figure == "populations_phases_vs_bandwidth") {
    out.push_back(write_svg(dir / "populations.svg", line_chart(load("populations"), "final populations", "population")));
    out.push_back(write_svg(dir / "phases.svg", line_chart(load("phases"), "relative phases", "phase (rad)")));
  } else if (figure == "orientation_phase_map" || figure == "orientation_phase_cuts") {
    if (figure == "orientation_phase_map")
      out.push_back(write_svg(dir / "map.svg", heat_map(load("map"), "max |<cos theta>| (" + config + ")")));
    out.push_back(write_svg(dir / "cut_a.svg", line_chart(load("cut_a"), "cut line", "max |<cos theta>|")));
    out.push_back(write_svg(dir / "cut_b.svg", line_chart(load("cut_b"), "cut line", "max |<cos theta>|")));
  } else if (figure == "single_scenario") {
    out.push_back(write_svg(dir / "orientation.svg", line_chart(load("orientation"), "<cos theta>(t)", "<cos theta>")));
    out.push_back(write_svg(dir / "populations.svg", line_chart(load("populations"), "populations", "population")));
  } else if (figure == "pulse_design") {
    // nothing tabular beyond the train itself
  } else {
    throw std::invalid_argument("no renderer for figure '" + figure + "'");
  }
  return out;
}

}  // namespace polariton
