#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rbt/format.hpp"
#include "rbt/harness/csv.hpp"

namespace rbt::harness {

struct PlotPoint {
  int repetition = 0;
  int iteration = 0;
  double insertion = 0.0;
  double force = 0.0;
  bool front = false;
};

inline constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

/// Collects all evaluated points of a run directory; front membership comes
/// from the front CSVs.
inline std::vector<PlotPoint> load_plot_points(const std::filesystem::path& dir) {
  std::map<int, std::filesystem::path> hist, front;
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      const std::string f = e.path().filename().string();
      auto rep_of = [&](const std::string& prefix) {
        return std::stoi(f.substr(prefix.size(), f.size() - prefix.size() - 4));
      };
      if (f.starts_with("history_rep") && f.ends_with(".csv")) hist[rep_of("history_rep")] = e.path();
      if (f.starts_with("front_rep") && f.ends_with(".csv")) front[rep_of("front_rep")] = e.path();
    }
  if (hist.empty()) throw Error(ErrorCode::MissingData, "no history CSVs in '" + dir.string() + "'");

  std::vector<PlotPoint> pts;
  for (const auto& [rep, path] : hist) {
    auto fit = front.find(rep);
    if (fit == front.end()) throw Error(ErrorCode::MissingData, "no front CSV for repetition " + std::to_string(rep));
    const CsvTable h = parse_csv(read_file(path.string()));
    const CsvTable f = parse_csv(read_file(fit->second.string()));
    if (h.rows.empty()) throw Error(ErrorCode::MissingData, path.string() + " has no records");
    if (f.rows.empty()) throw Error(ErrorCode::MissingData, fit->second.string() + " has no records");
    std::vector<int> front_iters;
    for (std::size_t i = 0; i < f.rows.size(); ++i) front_iters.push_back(std::stoi(f.at(i, "iteration")));
    for (std::size_t i = 0; i < h.rows.size(); ++i) {
      PlotPoint p;
      p.repetition = rep;
      p.iteration = std::stoi(h.at(i, "iteration"));
      p.insertion = std::stod(h.at(i, "mean_insertion"));
      p.force = std::stod(h.at(i, "mean_force"));
      p.front = std::find(front_iters.begin(), front_iters.end(), p.iteration) != front_iters.end();
      pts.push_back(p);
    }
  }
  return pts;
}

/// Scatter of insertion reward (x) against force reward (y), one color per
/// repetition, front members drawn larger with a dark outline. Every point
/// carries data-* attributes so the plotted set can be read back.
inline std::string render_svg(const std::vector<PlotPoint>& pts, const std::string& title) {
  const double W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
  double x0 = 0, x1 = 175, y0 = -1, y1 = 0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.insertion);
    x1 = std::max(x1, p.insertion);
    y0 = std::min(y0, p.force);
    y1 = std::max(y1, p.force);
  }
  auto sx = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  auto n = [](double v) { return fmt_num(std::round(v * 100.0) / 100.0); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + n(W) + "\" height=\"" + n(H) +
                  "\" viewBox=\"0 0 " + n(W) + " " + n(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + n(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       title + "</text>\n";
  s += "<line x1=\"" + n(L) + "\" y1=\"" + n(H - B) + "\" x2=\"" + n(W - R) + "\" y2=\"" + n(H - B) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + n(L) + "\" y1=\"" + n(T) + "\" x2=\"" + n(L) + "\" y2=\"" + n(H - B) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    s += "<text x=\"" + n(sx(xv)) + "\" y=\"" + n(H - B + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + n(xv) + "</text>\n";
    s += "<text x=\"" + n(L - 6) + "\" y=\"" + n(sy(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + n(yv) + "</text>\n";
  }
  s += "<text x=\"" + n((L + W - R) / 2) + "\" y=\"" + n(H - 15) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">insertion reward</text>\n";
  s += "<text transform=\"translate(18," + n((T + H - B) / 2) +
       ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">force reward</text>\n";

  // regular points first so front members stay on top
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& p : pts) {
      if (p.front != (pass == 1)) continue;
      const char* color = kPalette[static_cast<std::size_t>(p.repetition) % kPalette.size()];
      s += "<circle class=\"" + std::string(p.front ? "front" : "point") + "\" cx=\"" + n(sx(p.insertion)) +
           "\" cy=\"" + n(sy(p.force)) + "\" r=\"" + (p.front ? "5" : "2.5") + "\" fill=\"" + color + "\"" +
           (p.front ? " stroke=\"black\" stroke-width=\"1.5\"" : " fill-opacity=\"0.6\"") + " data-rep=\"" +
           std::to_string(p.repetition) + "\" data-iteration=\"" + std::to_string(p.iteration) +
           "\" data-insertion=\"" + fmt_num(p.insertion) + "\" data-force=\"" + fmt_num(p.force) +
           "\" data-front=\"" + (p.front ? "1" : "0") + "\"/>\n";
    }
  s += "</svg>\n";
  return s;
}

/// Writes <dir>/pareto.svg and returns its path.
inline std::filesystem::path plot_run(const std::filesystem::path& dir) {
  const auto pts = load_plot_points(dir);
  const auto out = dir / "pareto.svg";
  write_file(out.string(), render_svg(pts, dir.filename().string()));
  return out;
}

/// Plots `dir` itself if it is a run directory, otherwise every run
/// directory directly below it.
inline std::vector<std::filesystem::path> plot(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::MissingData, "no directory '" + dir.string() + "'");
  if (std::filesystem::exists(dir / "manifest.json")) return {plot_run(dir)};
  std::vector<std::filesystem::path> runs;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_directory() && std::filesystem::exists(e.path() / "manifest.json")) runs.push_back(e.path());
  std::sort(runs.begin(), runs.end());
  if (runs.empty()) throw Error(ErrorCode::MissingData, "no run directories in '" + dir.string() + "'");
  std::vector<std::filesystem::path> out;
  for (const auto& r : runs) out.push_back(plot_run(r));
  return out;
}

}  // namespace rbt::harness
