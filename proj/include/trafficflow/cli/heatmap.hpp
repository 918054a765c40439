#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "trafficflow/network.hpp"

namespace trafficflow::cli {

struct HeatmapOptions {
  std::size_t m = 3;
  double step = 0.1;
  std::size_t jobs = 1;
  bool best_effort = false;
};

struct HeatmapCell {
  double delta = 0.0;
  double epsilon = 0.0;
  double fraction = 0.0;  ///< |U| / n
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;
  bool ok = true;
  std::string error;

  bool operator==(const HeatmapCell&) const = default;
};

struct HeatmapGrid {
  std::size_t m = 0;
  Vector deltas;
  Vector epsilons;
  /// Row-major by delta: cells[d * epsilons.size() + e].
  std::vector<HeatmapCell> cells;

  const HeatmapCell& at(std::size_t d, std::size_t e) const { return cells[d * epsilons.size() + e]; }
};

/// 0, step, 2 step, ... below 1, then 1 itself.
Vector grid_points(double step);

HeatmapGrid run_heatmap(const HeatmapOptions& options);

std::string heatmap_csv(const HeatmapGrid& grid);
std::vector<HeatmapCell> parse_heatmap_csv(const std::string& text);
std::string heatmap_svg(const HeatmapGrid& grid);

struct MonotonicityReport {
  std::size_t checked_pairs = 0;
  std::size_t violations = 0;  ///< drops larger than the slack
  std::size_t ties_or_slack = 0;
  double worst_drop = 0.0;
};

/// Fractions should not decrease along increasing delta or epsilon; drops up
/// to `slack` are tolerated and counted separately.
MonotonicityReport check_monotonicity(const HeatmapGrid& grid, double slack);

/// Writes <prefix>.csv and <prefix>.svg and prints a summary.
int cmd_heatmap(const HeatmapOptions& options, const std::string& prefix, std::ostream& out,
                std::ostream& err);

}  // namespace trafficflow::cli
