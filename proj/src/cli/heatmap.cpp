#include "trafficflow/cli/heatmap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "trafficflow/cli/commands.hpp"
#include "trafficflow/generators.hpp"
#include "trafficflow/solvers.hpp"

namespace trafficflow::cli {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

HeatmapCell solve_cell(std::size_t m, double delta, double epsilon, bool best_effort) {
  HeatmapCell cell;
  cell.delta = delta;
  cell.epsilon = epsilon;
  try {
    const Network net = gen_example1({m, delta, epsilon});
    OverflowOptions options;
    options.best_effort = best_effort;
    const auto [sol, trace] = solve_overflow(net, options);
    cell.fraction = static_cast<double>(sol.unstable_set.size()) / static_cast<double>(net.n);
    cell.outer_iterations = trace.outer_iterations;
    cell.inner_iterations = trace.inner_iterations_total;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.fraction = std::nan("");
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

Vector grid_points(double step) {
  if (!(step > 0.0 && step <= 0.5)) throw std::invalid_argument("step must lie in (0, 0.5]");
  Vector points;
  for (std::size_t k = 0;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (!(x < 1.0 - 1e-12)) break;
    points.push_back(x);
  }
  points.push_back(1.0);
  return points;
}

HeatmapGrid run_heatmap(const HeatmapOptions& options) {
  if (options.m < 2) throw std::invalid_argument("m must be at least 2");
  HeatmapGrid grid;
  grid.m = options.m;
  grid.deltas = grid_points(options.step);
  grid.epsilons = grid.deltas;
  const std::size_t ne = grid.epsilons.size();
  const std::size_t total = grid.deltas.size() * ne;
  grid.cells.resize(total);

  std::size_t jobs = options.jobs;
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min(jobs, total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      grid.cells[idx] = solve_cell(options.m, grid.deltas[idx / ne], grid.epsilons[idx % ne],
                                   options.best_effort);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  return grid;
}

std::string heatmap_csv(const HeatmapGrid& grid) {
  std::string out = "delta,epsilon,fraction,outer_iters,inner_iters\n";
  for (const HeatmapCell& c : grid.cells) {
    out += fmt17(c.delta) + "," + fmt17(c.epsilon) + "," + (c.ok ? fmt17(c.fraction) : "nan") + "," +
           std::to_string(c.outer_iterations) + "," + std::to_string(c.inner_iterations) + "\n";
  }
  return out;
}

std::vector<HeatmapCell> parse_heatmap_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "delta,epsilon,fraction,outer_iters,inner_iters") {
    throw std::runtime_error("unexpected heat map CSV header");
  }
  std::vector<HeatmapCell> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string f[5];
    for (std::string& s : f) {
      if (!std::getline(fields, s, ',')) throw std::runtime_error("short heat map CSV row: " + line);
    }
    HeatmapCell c;
    c.delta = std::strtod(f[0].c_str(), nullptr);
    c.epsilon = std::strtod(f[1].c_str(), nullptr);
    c.ok = f[2] != "nan";
    c.fraction = c.ok ? std::strtod(f[2].c_str(), nullptr) : std::nan("");
    c.outer_iterations = std::stoul(f[3]);
    c.inner_iterations = std::stoul(f[4]);
    cells.push_back(c);
  }
  return cells;
}

std::string heatmap_svg(const HeatmapGrid& grid) {
  constexpr int kCell = 6;
  constexpr int kMargin = 40;
  const std::size_t nd = grid.deltas.size();
  const std::size_t ne = grid.epsilons.size();
  const int width = static_cast<int>(ne) * kCell + 2 * kMargin;
  const int height = static_cast<int>(nd) * kCell + 2 * kMargin;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
     << "<title>fraction of overflowing nodes, m=" << grid.m << "</title>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  // epsilon runs left to right, delta bottom to top.
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t e = 0; e < ne; ++e) {
      const HeatmapCell& c = grid.at(d, e);
      const int x = kMargin + static_cast<int>(e) * kCell;
      const int y = kMargin + static_cast<int>(nd - 1 - d) * kCell;
      std::string fill = "#ff0000";
      if (c.ok) {
        const double f = std::min(1.0, std::max(0.0, c.fraction));
        const int v = static_cast<int>(std::lround(255.0 * (1.0 - f)));
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", v, v, v);
        fill = buf;
      }
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
         << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" font-size=\"12\" text-anchor=\"middle\">epsilon</text>\n"
     << "<text x=\"14\" y=\"" << height / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << height / 2 << ")\">delta</text>\n"
     << "</svg>\n";
  return os.str();
}

MonotonicityReport check_monotonicity(const HeatmapGrid& grid, double slack) {
  MonotonicityReport report;
  auto compare = [&](const HeatmapCell& lo, const HeatmapCell& hi) {
    if (!lo.ok || !hi.ok) return;
    ++report.checked_pairs;
    const double drop = lo.fraction - hi.fraction;
    if (drop <= 0.0) return;
    report.worst_drop = std::max(report.worst_drop, drop);
    if (drop <= slack + 1e-12) {
      ++report.ties_or_slack;
    } else {
      ++report.violations;
    }
  };
  const std::size_t nd = grid.deltas.size();
  const std::size_t ne = grid.epsilons.size();
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t e = 0; e < ne; ++e) {
      if (d + 1 < nd) compare(grid.at(d, e), grid.at(d + 1, e));
      if (e + 1 < ne) compare(grid.at(d, e), grid.at(d, e + 1));
    }
  }
  return report;
}

int cmd_heatmap(const HeatmapOptions& options, const std::string& prefix, std::ostream& out,
                std::ostream& err) {
  HeatmapGrid grid;
  try {
    grid = run_heatmap(options);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const std::string csv_path = prefix + ".csv";
  const std::string svg_path = prefix + ".svg";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    std::ofstream svg(svg_path, std::ios::binary);
    if (!csv || !svg) {
      err << "error: cannot write " << csv_path << " or " << svg_path << "\n";
      return kExitInputError;
    }
    csv << heatmap_csv(grid);
    svg << heatmap_svg(grid);
  }

  std::size_t failed = 0;
  for (const HeatmapCell& c : grid.cells) {
    if (!c.ok) {
      if (failed == 0) err << "first failure at delta=" << c.delta << " epsilon=" << c.epsilon << ": " << c.error << "\n";
      ++failed;
    }
  }
  const double n = static_cast<double>(4 * options.m * options.m);
  const MonotonicityReport mono = check_monotonicity(grid, 1.0 / n);
  out << "grid points: " << grid.cells.size() << "\n";
  out << "failed solves: " << failed << "\n";
  out << "monotonicity: " << mono.violations << " violations beyond 1/n slack, " << mono.ties_or_slack
      << " drops within slack, " << mono.checked_pairs << " pairs checked\n";
  out << "wrote " << csv_path << " and " << svg_path << "\n";
  return failed == 0 ? kExitOk : kExitNonConvergence;
}

}  // namespace trafficflow::cli
