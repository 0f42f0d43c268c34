#include "foels/synth_scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace foels {
namespace {

void validate(const SceneSpec& scene, const CameraIntrinsics& intr) {
  if (intr.width <= 0 || intr.height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  if (!(intr.fx > 0.0 && intr.fy > 0.0) || !(intr.zoom_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths and zoom rate must be positive");
  }
  if (!(intr.cx >= 0.0 && intr.cx < intr.width && intr.cy >= 0.0 && intr.cy < intr.height)) {
    throw Error(ErrorCode::kInvalidArgument, "principal point outside the image");
  }
  const auto& bg = scene.background;
  if (!(bg.depth_at(0) > 0.0 && bg.depth_at(intr.width - 1) > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "background depth must be positive");
  }
  std::set<int> ids;
  for (const auto& obj : scene.objects) {
    const auto& r = obj.rect;
    if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.x + r.w > intr.width ||
        r.y + r.h > intr.height) {
      throw Error(ErrorCode::kInvalidArgument, "object rect outside the image");
    }
    if (!(obj.depth > 0.0)) throw Error(ErrorCode::kInvalidArgument, "object depth must be positive");
    if (obj.instance_id <= 0 || !ids.insert(obj.instance_id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "instance ids must be distinct and positive (" +
                      std::to_string(obj.instance_id) + ")");
    }
  }
}

}  // namespace

RenderedFrame render_flow(const SceneSpec& scene, const CameraIntrinsics& intr,
                          const CameraMotion& motion) {
  validate(scene, intr);
  const int width = intr.width;
  const int height = intr.height;
  RenderedFrame out{FlowField(width, height),
                    PanopticMap(width, height, scene.background.class_id, 0),
                    BinaryMask(width, height)};

  const Vec3& t = motion.t;
  const Vec3& w = motion.omega;
  const double fx = intr.fx, fy = intr.fy;

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = out.flow.u().index(x, y);
      const SceneObject* owner = nullptr;
      for (const auto& obj : scene.objects) {
        if (obj.rect.contains(x, y)) owner = &obj;
      }
      const bool sky = !owner && scene.sky && y < scene.sky->rows;
      if (sky) {
        out.seg.class_id[i] = scene.sky->class_id;
        out.flow.invalidate(i);
        continue;
      }

      double depth = scene.background.depth_at(x);
      Vec3 velocity;
      if (owner) {
        depth = owner->depth;
        velocity = owner->velocity;
        out.seg.class_id[i] = owner->class_id;
        out.seg.instance_id[i] = owner->instance_id;
        out.moving[i] = velocity != Vec3{};
      }

      const double xc = x - intr.cx;
      const double yc = y - intr.cy;
      // Point in the second camera frame, scaled by fx (fy): X fx = xc depth + fx dX.
      const double dx = velocity.x - t.x;
      const double dy = velocity.y - t.y;
      const double Z = depth + velocity.z - t.z;
      if (!(Z > 0.0)) {
        throw Error(ErrorCode::kBehindCamera,
                    "pixel (" + std::to_string(x) + ", " + std::to_string(y) + ")");
      }
      // Written as one quotient so a static world gives exactly zero flow.
      double u = (intr.zoom_rate * (xc * depth + fx * dx) - xc * Z) / Z;
      double v = (intr.zoom_rate * (yc * depth + fy * dy) - yc * Z) / Z;
      u += xc * yc / fy * w.x - (fx + xc * xc / fx) * w.y + fx * yc / fy * w.z;
      v += (fy + yc * yc / fy) * w.x - xc * yc / fx * w.y - fy * xc / fx * w.z;

      if (owner && owner->hole && owner->hole->contains(x, y)) {
        out.flow.invalidate(i);
      } else {
        out.flow.set(i, static_cast<float>(u), static_cast<float>(v));
      }
    }
  }
  return out;
}

SignedFoe ground_truth_foe(const CameraIntrinsics& intr, const CameraMotion& motion) {
  if (motion.omega != Vec3{}) {
    throw Error(ErrorCode::kRotationPresent, "a rotating camera has no single FoE");
  }
  const Vec3& t = motion.t;
  if (t.z != 0.0) {
    return SignedFoe::finite({intr.fx * t.x / t.z + intr.cx, intr.fy * t.y / t.z + intr.cy},
                             t.z > 0.0 ? +1 : -1);
  }
  if (t.x != 0.0 || t.y != 0.0) return SignedFoe::at_infinity({-intr.fx * t.x, -intr.fy * t.y});
  if (intr.zoom_rate != 1.0) {
    return SignedFoe::finite({intr.cx, intr.cy}, intr.zoom_rate > 1.0 ? +1 : -1);
  }
  throw Error(ErrorCode::kNoMotion, "camera neither translates nor zooms");
}

SceneFile parse_scene(std::istream& in) {
  SceneFile file;
  bool have_size = false;
  bool have_background = false;
  bool have_intrinsics = false;
  std::string line;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    const std::string where = "line " + std::to_string(line_no) + " (" + key + ")";
    auto fail = [&] { throw Error(ErrorCode::kParseError, where); };
    auto& intr = file.intrinsics;

    if (key == "name") {
      if (!(fields >> file.name)) fail();
    } else if (key == "size") {
      if (!(fields >> intr.width >> intr.height)) fail();
      have_size = true;
    } else if (key == "intrinsics") {
      if (!(fields >> intr.fx >> intr.fy >> intr.cx >> intr.cy)) fail();
      have_intrinsics = true;
    } else if (key == "zoom") {
      if (!(fields >> intr.zoom_rate)) fail();
    } else if (key == "translation") {
      auto& t = file.motion.t;
      if (!(fields >> t.x >> t.y >> t.z)) fail();
    } else if (key == "rotation") {
      auto& w = file.motion.omega;
      if (!(fields >> w.x >> w.y >> w.z)) fail();
    } else if (key == "background") {
      std::string kind;
      auto& bg = file.scene.background;
      fields >> kind;
      if (kind == "plane") {
        bg.kind = Background::Kind::kPlane;
        if (!(fields >> bg.depth >> bg.class_id)) fail();
      } else if (kind == "ramp") {
        bg.kind = Background::Kind::kRamp;
        if (!(fields >> bg.depth >> bg.slope >> bg.class_id)) fail();
      } else {
        fail();
      }
      have_background = true;
    } else if (key == "sky") {
      SkyBand sky;
      if (!(fields >> sky.rows >> sky.class_id)) fail();
      file.scene.sky = sky;
    } else if (key == "object") {
      SceneObject obj;
      auto& r = obj.rect;
      auto& v = obj.velocity;
      if (!(fields >> r.x >> r.y >> r.w >> r.h >> obj.depth >> obj.class_id >> obj.instance_id >>
            v.x >> v.y >> v.z)) {
        fail();
      }
      std::string extra;
      if (fields >> extra) {
        PixelRect hole;
        if (extra != "hole" || !(fields >> hole.x >> hole.y >> hole.w >> hole.h)) fail();
        obj.hole = hole;
      }
      file.scene.objects.push_back(obj);
    } else {
      fail();
    }
    std::string trailing;
    if (fields >> trailing) fail();
  }

  if (!have_size || !have_background) {
    throw Error(ErrorCode::kParseError, "scene needs at least 'size' and 'background' lines");
  }
  if (!have_intrinsics) {
    auto& intr = file.intrinsics;
    intr.fx = intr.fy = intr.width;
    intr.cx = intr.width / 2.0;
    intr.cy = intr.height / 2.0;
  }
  return file;
}

SceneFile load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  return parse_scene(in);
}

}  // namespace foels
