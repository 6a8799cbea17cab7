#include "instfuse/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "instfuse/errors.hpp"

namespace instfuse::quality {

namespace {

double prepare_p(double p, const MalParams& params) {
  if (params.clamp_probs) {
    return std::clamp(p, params.eps, 1.0 - params.eps);
  }
  if (p < params.eps || p > 1.0 - params.eps) {
    throw std::domain_error("mal_loss: p outside [eps, 1-eps]");
  }
  return p;
}

}  // namespace

double mal_loss(double p, double q, const MalParams& params) {
  p = prepare_p(p, params);
  if (q <= 0.0) {
    return -std::pow(p, params.gamma) * std::log(1.0 - p);
  }
  const double t = std::pow(q, params.gamma);
  return -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
}

double mal_grad(double p, double q, const MalParams& params) {
  p = prepare_p(p, params);
  if (q <= 0.0) {
    // d/dp [ -p^g log(1-p) ] = -g p^(g-1) log(1-p) + p^g / (1-p)
    return -params.gamma * std::pow(p, params.gamma - 1.0) * std::log(1.0 - p) +
           std::pow(p, params.gamma) / (1.0 - p);
  }
  const double t = std::pow(q, params.gamma);
  return (p - t) / (p * (1.0 - p));
}

std::pair<std::int32_t, std::int32_t> grid_cell(double x, double y) {
  return {static_cast<std::int32_t>(std::floor(x / kGridResolution)),
          static_cast<std::int32_t>(std::floor(y / kGridResolution))};
}

FilterResult filter_instances(const std::vector<sim::Instance>& instances,
                              const geom::Pose2D& agent_to_ego,
                              const FilterConfig& cfg) {
  if (cfg.score_threshold < 0.0 || cfg.score_threshold > 1.0) {
    throw ConfigError("score_threshold must be in [0, 1]");
  }

  FilterResult result;
  for (const sim::Instance& inst : instances) {
    if (inst.score < cfg.score_threshold) continue;
    sim::Instance moved = inst;
    moved.box = geom::transform_box(agent_to_ego, inst.box);
    moved.frame = sim::FrameTag::Ego;
    if (std::abs(moved.box.bev.cx) > cfg.ego_range_x ||
        std::abs(moved.box.bev.cy) > cfg.ego_range_y) {
      continue;
    }
    result.kept.push_back(std::move(moved));
  }

  std::stable_sort(result.kept.begin(), result.kept.end(),
                   [](const sim::Instance& a, const sim::Instance& b) {
                     return a.score > b.score;
                   });

  result.position_map.reserve(result.kept.size());
  for (const sim::Instance& inst : result.kept) {
    const auto [gx, gy] = grid_cell(inst.box.bev.cx, inst.box.bev.cy);
    result.position_map.push_back({inst.instance_id, gx, gy});
  }
  return result;
}

}  // namespace instfuse::quality
