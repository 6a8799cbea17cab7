#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "instfuse/geometry.hpp"

namespace instfuse::sim {

enum class ObjectClass { Vehicle };

// Which coordinate system an instance's box currently lives in.
enum class FrameTag { Agent, Ego };

struct SceneObject {
  int id = 0;
  geom::OrientedBox3D box;  // world frame
  ObjectClass cls = ObjectClass::Vehicle;
};

// Per-agent detector emulation parameters. The emulator stands in for a
// neural single-agent detector: it derives instances from ground truth with
// configurable visibility, localization noise, confidence modelling, feature
// domain shift and false positives.
struct AgentConfig {
  int agent_id = 0;
  geom::Pose2D pose;  // world frame
  double range_x = 100.0;  // perception half-extent, m
  double range_y = 100.0;
  double detect_prob_base = 1.0;
  double detect_decay = 0.0;       // detection probability drop per meter
  double loc_noise_sigma = 0.0;    // center noise, m
  double yaw_noise_sigma = 0.0;    // rad
  double score_base = 0.9;
  double score_k = 0.3;            // confidence drop per meter of center error
  double score_noise_sigma = 0.0;
  double feature_noise_sigma = 0.0;
  double domain_scale = 1.0;       // affine feature shift, models hardware gaps
  double domain_offset = 0.0;
  double false_positive_rate = 0.0;  // expected false positives per frame
  int query_cap = 300;
};

struct Instance {
  int instance_id = 0;
  int agent_id = 0;
  std::vector<float> feature;
  geom::OrientedBox3D box;
  double score = 0.0;
  FrameTag frame = FrameTag::Agent;
};

struct PointCloud {
  std::vector<std::array<double, 3>> points;
  FrameTag frame = FrameTag::Agent;
};

// Scene synthesis parameters: object placement region, box dimension ranges,
// agent line-up, and the template agents inherit their emulation knobs from.
struct LayoutSpec {
  double extent_x = 150.0;
  double extent_y = 30.0;
  double min_spacing = 10.0;  // center spacing floor, on top of zero overlap
  double length_min = 3.8, length_max = 4.8;
  double width_min = 1.7, width_max = 2.1;
  double height_min = 1.4, height_max = 1.8;
  double agent_spacing = 20.0;
  int max_attempts_per_object = 100;
  AgentConfig agent_template;
  // Per-agent feature domain shift: agent k gets scale 1 + k*scale_step,
  // offset k*offset_step.
  double domain_scale_step = 0.05;
  double domain_offset_step = 0.02;
};

struct Scene {
  std::uint64_t seed = 0;
  int frame_count = 1;
  std::vector<SceneObject> objects;
  std::vector<AgentConfig> agents;
};

/// Deterministic synthetic scene: agent 0 is the ego at the origin, objects
/// are placed by rejection sampling with pairwise-zero BEV overlap and the
/// layout's center-spacing floor. Throws PlacementError when the budget of
/// max_attempts_per_object rejections is exhausted.
Scene generate_scene(std::uint64_t seed, int n_objects, int n_agents,
                     const LayoutSpec& layout = {});

/// Unit-norm pseudo-random feature keyed by object id only, so the same
/// object yields the same base feature for every agent and every run.
std::vector<float> embed_feature(int object_id, int dim);

/// Emulated single-agent detector output, in the agent's frame. Each in-range
/// object passes a visibility draw and yields one instance (noisy box,
/// error-correlated score, domain-shifted feature); Poisson false positives
/// with low scores are appended; output is truncated to query_cap by score.
std::vector<Instance> emulate_detections(std::span<const SceneObject> objects,
                                         const AgentConfig& cfg,
                                         std::uint64_t seed, int feature_dim);

/// Uniform points inside each object's 3D box, restricted to the agent's
/// range, expressed in the agent frame. density is points per m^2 of BEV area.
PointCloud synthesize_points(std::span<const SceneObject> objects,
                             const AgentConfig& cfg, double density,
                             std::uint64_t seed);

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
void write_scene_file(const Scene& scene, const std::string& path);
Scene read_scene_file(const std::string& path);

}  // namespace instfuse::sim
