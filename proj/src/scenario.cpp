#include "instfuse/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "instfuse/errors.hpp"
#include "instfuse/rng.hpp"
#include "json.hpp"

namespace instfuse::sim {

namespace {

constexpr std::uint64_t kEmbedKey = 0x1f0c4d5e6a7b8c9dULL;

bool in_range(const AgentConfig& cfg, double x, double y) {
  return std::abs(x) <= cfg.range_x && std::abs(y) <= cfg.range_y;
}

// Keep the query_cap highest-scoring instances, preserving input order.
// Ties drop the later index first.
void truncate_to_cap(std::vector<Instance>& out, int cap) {
  if (cap <= 0 || out.size() <= static_cast<std::size_t>(cap)) return;
  std::vector<std::size_t> idx(out.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return out[a].score > out[b].score;
  });
  idx.resize(static_cast<std::size_t>(cap));
  std::sort(idx.begin(), idx.end());
  std::vector<Instance> kept;
  kept.reserve(idx.size());
  for (std::size_t i : idx) kept.push_back(std::move(out[i]));
  out = std::move(kept);
}

}  // namespace

Scene generate_scene(std::uint64_t seed, int n_objects, int n_agents,
                     const LayoutSpec& layout) {
  if (n_objects < 0) throw ConfigError("n_objects must be >= 0");
  if (n_agents < 1) throw ConfigError("n_agents must be >= 1");

  Scene scene;
  scene.seed = seed;

  Rng obj_rng(derive_seed(seed, Stream::Objects));
  for (int i = 0; i < n_objects; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < layout.max_attempts_per_object;
         ++attempt) {
      SceneObject obj;
      obj.id = i;
      obj.box.bev.cx = obj_rng.uniform(-layout.extent_x, layout.extent_x);
      obj.box.bev.cy = obj_rng.uniform(-layout.extent_y, layout.extent_y);
      obj.box.bev.length = obj_rng.uniform(layout.length_min, layout.length_max);
      obj.box.bev.width = obj_rng.uniform(layout.width_min, layout.width_max);
      obj.box.bev.yaw =
          obj_rng.uniform(-std::numbers::pi, std::numbers::pi);
      obj.box.height = obj_rng.uniform(layout.height_min, layout.height_max);
      obj.box.cz = 0.5 * obj.box.height;

      bool ok = true;
      for (const SceneObject& other : scene.objects) {
        const double dx = obj.box.bev.cx - other.box.bev.cx;
        const double dy = obj.box.bev.cy - other.box.bev.cy;
        if (std::hypot(dx, dy) < layout.min_spacing ||
            geom::intersection_area(obj.box.bev, other.box.bev) > 0.0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        scene.objects.push_back(obj);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw PlacementError("could not place object " + std::to_string(i) +
                           " within the attempt budget");
    }
  }

  for (int a = 0; a < n_agents; ++a) {
    AgentConfig cfg = layout.agent_template;
    cfg.agent_id = a;
    cfg.pose = {a * layout.agent_spacing, 0.0, 0.0};
    cfg.domain_scale = 1.0 + a * layout.domain_scale_step;
    cfg.domain_offset = a * layout.domain_offset_step;
    scene.agents.push_back(cfg);
  }
  return scene;
}

std::vector<float> embed_feature(int object_id, int dim) {
  Rng rng(derive_seed(kEmbedKey, Stream::Embed,
                      static_cast<std::uint64_t>(object_id)));
  std::vector<float> v(static_cast<std::size_t>(dim));
  double norm2 = 0.0;
  std::vector<double> raw(v.size());
  for (double& x : raw) {
    x = rng.normal();
    norm2 += x * x;
  }
  const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<float>(raw[i] * inv);
  }
  return v;
}

std::vector<Instance> emulate_detections(std::span<const SceneObject> objects,
                                         const AgentConfig& cfg,
                                         std::uint64_t seed, int feature_dim) {
  const auto agent = static_cast<std::uint64_t>(cfg.agent_id);
  Rng vis_rng(derive_seed(seed, Stream::Visibility, agent));
  Rng box_rng(derive_seed(seed, Stream::BoxNoise, agent));
  Rng score_rng(derive_seed(seed, Stream::Score, agent));
  Rng feat_rng(derive_seed(seed, Stream::FeatureNoise, agent));
  Rng fp_rng(derive_seed(seed, Stream::FalsePositives, agent));

  const geom::Pose2D world_to_agent = geom::inverse(cfg.pose);
  std::vector<Instance> out;
  int next_id = 0;

  for (const SceneObject& obj : objects) {
    const geom::OrientedBox3D truth = geom::transform_box(world_to_agent, obj.box);
    if (!in_range(cfg, truth.bev.cx, truth.bev.cy)) continue;
    const double dist = std::hypot(truth.bev.cx, truth.bev.cy);
    const double p = std::clamp(
        cfg.detect_prob_base - cfg.detect_decay * dist, 0.0, 1.0);
    if (vis_rng.uniform() >= p) continue;

    Instance inst;
    inst.instance_id = next_id++;
    inst.agent_id = cfg.agent_id;
    inst.box = truth;
    double err = 0.0;
    if (cfg.loc_noise_sigma > 0.0) {
      const double nx = box_rng.normal(0.0, cfg.loc_noise_sigma);
      const double ny = box_rng.normal(0.0, cfg.loc_noise_sigma);
      inst.box.bev.cx += nx;
      inst.box.bev.cy += ny;
      err = std::hypot(nx, ny);
    }
    if (cfg.yaw_noise_sigma > 0.0) {
      inst.box.bev.yaw = geom::normalize_angle(
          inst.box.bev.yaw + box_rng.normal(0.0, cfg.yaw_noise_sigma));
    }
    double score = cfg.score_base - cfg.score_k * err;
    if (cfg.score_noise_sigma > 0.0) {
      score += score_rng.normal(0.0, cfg.score_noise_sigma);
    }
    inst.score = std::clamp(score, 0.01, 0.99);

    inst.feature = embed_feature(obj.id, feature_dim);
    for (float& f : inst.feature) {
      double v = f * cfg.domain_scale + cfg.domain_offset;
      if (cfg.feature_noise_sigma > 0.0) {
        v += feat_rng.normal(0.0, cfg.feature_noise_sigma);
      }
      f = static_cast<float>(v);
    }
    out.push_back(std::move(inst));
  }

  const int n_fp = fp_rng.poisson(cfg.false_positive_rate);
  for (int k = 0; k < n_fp; ++k) {
    Instance inst;
    inst.instance_id = next_id++;
    inst.agent_id = cfg.agent_id;
    inst.box.bev.cx = fp_rng.uniform(-cfg.range_x, cfg.range_x);
    inst.box.bev.cy = fp_rng.uniform(-cfg.range_y, cfg.range_y);
    inst.box.bev.length = fp_rng.uniform(4.0, 4.6);
    inst.box.bev.width = fp_rng.uniform(1.8, 2.0);
    inst.box.bev.yaw = fp_rng.uniform(-std::numbers::pi, std::numbers::pi);
    inst.box.height = fp_rng.uniform(1.4, 1.7);
    inst.box.cz = 0.5 * inst.box.height;
    inst.score = fp_rng.uniform(0.01, 0.3);

    std::vector<double> raw(static_cast<std::size_t>(feature_dim));
    double norm2 = 0.0;
    for (double& x : raw) {
      x = fp_rng.normal();
      norm2 += x * x;
    }
    const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
    inst.feature.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      inst.feature[i] = static_cast<float>(
          raw[i] * inv * cfg.domain_scale + cfg.domain_offset);
    }
    out.push_back(std::move(inst));
  }

  truncate_to_cap(out, cfg.query_cap);
  return out;
}

PointCloud synthesize_points(std::span<const SceneObject> objects,
                             const AgentConfig& cfg, double density,
                             std::uint64_t seed) {
  if (density < 0.0) throw ConfigError("density must be >= 0");
  PointCloud cloud;
  cloud.frame = FrameTag::Agent;
  const geom::Pose2D world_to_agent = geom::inverse(cfg.pose);

  for (const SceneObject& obj : objects) {
    // Per-object stream so one object's points never depend on the others.
    Rng rng(derive_seed(seed, Stream::Points,
                        static_cast<std::uint64_t>(obj.id)));
    const auto n =
        static_cast<long long>(std::llround(density * geom::box_area(obj.box.bev)));
    const double c = std::cos(obj.box.bev.yaw);
    const double s = std::sin(obj.box.bev.yaw);
    for (long long i = 0; i < n; ++i) {
      const double u = rng.uniform(-0.5 * obj.box.bev.length,
                                   0.5 * obj.box.bev.length);
      const double v = rng.uniform(-0.5 * obj.box.bev.width,
                                   0.5 * obj.box.bev.width);
      const double z = rng.uniform(obj.box.cz - 0.5 * obj.box.height,
                                   obj.box.cz + 0.5 * obj.box.height);
      const double wx = obj.box.bev.cx + c * u - s * v;
      const double wy = obj.box.bev.cy + s * u + c * v;
      const geom::Vec2 ap = geom::transform_point(world_to_agent, {wx, wy});
      if (in_range(cfg, ap.x, ap.y)) {
        cloud.points.push_back({ap.x, ap.y, z});
      }
    }
  }
  return cloud;
}

namespace {

using nlohmann::json;

json box_to_json(const geom::OrientedBox3D& b) {
  return json{{"cx", b.bev.cx},     {"cy", b.bev.cy},
              {"cz", b.cz},         {"length", b.bev.length},
              {"width", b.bev.width}, {"height", b.height},
              {"yaw", b.bev.yaw}};
}

geom::OrientedBox3D box_from_json(const json& j) {
  geom::OrientedBox3D b;
  b.bev.cx = j.at("cx").get<double>();
  b.bev.cy = j.at("cy").get<double>();
  b.cz = j.at("cz").get<double>();
  b.bev.length = j.at("length").get<double>();
  b.bev.width = j.at("width").get<double>();
  b.height = j.at("height").get<double>();
  b.bev.yaw = j.at("yaw").get<double>();
  if (b.bev.length <= 0.0 || b.bev.width <= 0.0 || b.height <= 0.0) {
    throw ConfigError("box dimensions must be positive");
  }
  return b;
}

json agent_to_json(const AgentConfig& a) {
  return json{{"agent_id", a.agent_id},
              {"pose", {{"x", a.pose.x}, {"y", a.pose.y}, {"yaw", a.pose.yaw}}},
              {"range_x", a.range_x},
              {"range_y", a.range_y},
              {"detect_prob_base", a.detect_prob_base},
              {"detect_decay", a.detect_decay},
              {"loc_noise_sigma", a.loc_noise_sigma},
              {"yaw_noise_sigma", a.yaw_noise_sigma},
              {"score_base", a.score_base},
              {"score_k", a.score_k},
              {"score_noise_sigma", a.score_noise_sigma},
              {"feature_noise_sigma", a.feature_noise_sigma},
              {"domain_scale", a.domain_scale},
              {"domain_offset", a.domain_offset},
              {"false_positive_rate", a.false_positive_rate},
              {"query_cap", a.query_cap}};
}

AgentConfig agent_from_json(const json& j) {
  AgentConfig a;
  a.agent_id = j.at("agent_id").get<int>();
  const json& p = j.at("pose");
  a.pose = {p.at("x").get<double>(), p.at("y").get<double>(),
            p.at("yaw").get<double>()};
  a.range_x = j.at("range_x").get<double>();
  a.range_y = j.at("range_y").get<double>();
  a.detect_prob_base = j.at("detect_prob_base").get<double>();
  a.detect_decay = j.at("detect_decay").get<double>();
  a.loc_noise_sigma = j.at("loc_noise_sigma").get<double>();
  a.yaw_noise_sigma = j.at("yaw_noise_sigma").get<double>();
  a.score_base = j.at("score_base").get<double>();
  a.score_k = j.at("score_k").get<double>();
  a.score_noise_sigma = j.at("score_noise_sigma").get<double>();
  a.feature_noise_sigma = j.at("feature_noise_sigma").get<double>();
  a.domain_scale = j.at("domain_scale").get<double>();
  a.domain_offset = j.at("domain_offset").get<double>();
  a.false_positive_rate = j.at("false_positive_rate").get<double>();
  a.query_cap = j.value("query_cap", 300);
  if (a.range_x <= 0.0 || a.range_y <= 0.0) {
    throw ConfigError("agent ranges must be positive");
  }
  if (a.detect_prob_base < 0.0 || a.detect_prob_base > 1.0) {
    throw ConfigError("detect_prob_base must be in [0, 1]");
  }
  return a;
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  json j;
  j["seed"] = scene.seed;
  j["frame_count"] = scene.frame_count;
  j["objects"] = json::array();
  for (const SceneObject& o : scene.objects) {
    j["objects"].push_back(
        {{"id", o.id}, {"class", "vehicle"}, {"box", box_to_json(o.box)}});
  }
  j["agents"] = json::array();
  for (const AgentConfig& a : scene.agents) {
    j["agents"].push_back(agent_to_json(a));
  }
  return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scene JSON: ") + e.what());
  }
  try {
    Scene scene;
    scene.seed = j.at("seed").get<std::uint64_t>();
    scene.frame_count = j.at("frame_count").get<int>();
    if (scene.frame_count < 1) throw ConfigError("frame_count must be >= 1");
    for (const json& jo : j.at("objects")) {
      SceneObject o;
      o.id = jo.at("id").get<int>();
      o.box = box_from_json(jo.at("box"));
      scene.objects.push_back(o);
    }
    for (const json& ja : j.at("agents")) {
      scene.agents.push_back(agent_from_json(ja));
    }
    if (scene.agents.empty()) throw ConfigError("scene needs >= 1 agent");
    for (std::size_t i = 0; i + 1 < scene.objects.size(); ++i) {
      for (std::size_t k = i + 1; k < scene.objects.size(); ++k) {
        if (scene.objects[i].id == scene.objects[k].id) {
          throw ConfigError("duplicate object id " +
                            std::to_string(scene.objects[i].id));
        }
      }
    }
    return scene;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scene JSON: ") + e.what());
  }
}

void write_scene_file(const Scene& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << scene_to_json(scene);
  if (!out) throw ConfigError("write failed: " + path);
}

Scene read_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scene file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return scene_from_json(text);
}

}  // namespace instfuse::sim
