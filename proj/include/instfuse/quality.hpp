#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "instfuse/geometry.hpp"
#include "instfuse/scenario.hpp"

namespace instfuse::quality {

// Sparse position map cell size, meters. Shared with the position encodings.
inline constexpr double kGridResolution = 0.1;

struct MalParams {
  double gamma = 1.0;
  // When off, p outside [eps, 1-eps] is a domain error instead of being
  // clamped.
  bool clamp_probs = true;
  double eps = 1e-7;
};

struct FilterConfig {
  double score_threshold = 0.1;
  double ego_range_x = 100.0;
  double ego_range_y = 100.0;
};

/// IoU-aware classification loss (MAL). q > 0 uses the soft-target
/// cross-entropy form -(q^g log p + (1 - q^g) log(1 - p)), whose minimum in p
/// sits at p = q^g; q == 0 uses the hard-background branch -p^g log(1 - p).
double mal_loss(double p, double q, const MalParams& params = {});

/// Analytic d(mal_loss)/dp, piecewise to match both branches.
double mal_grad(double p, double q, const MalParams& params = {});

struct PositionEntry {
  int instance_id = 0;
  std::int32_t grid_x = 0;
  std::int32_t grid_y = 0;
};

struct FilterResult {
  std::vector<sim::Instance> kept;       // ego frame, descending score
  std::vector<PositionEntry> position_map;  // aligned with kept
};

std::pair<std::int32_t, std::int32_t> grid_cell(double x, double y);

/// Quality-aware filtering: drop instances below the score threshold or, after
/// transforming into the ego frame, outside the ego perception range. Kept
/// instances are re-expressed in the ego frame, ordered by descending score
/// (stable), and tagged with their 0.1 m grid cell.
FilterResult filter_instances(const std::vector<sim::Instance>& instances,
                              const geom::Pose2D& agent_to_ego,
                              const FilterConfig& cfg);

}  // namespace instfuse::quality
