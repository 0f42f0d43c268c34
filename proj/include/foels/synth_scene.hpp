#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "foels/foe_estimation.hpp"
#include "foels/segmentation_prior.hpp"

namespace foels {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(Vec3, Vec3) = default;
};

struct CameraIntrinsics {
  double fx = 100.0;
  double fy = 100.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  double zoom_rate = 1.0;  // multiplicative focal change per frame
};

/// Camera translation (scene units/frame) and small-angle rotation
/// (radians/frame) between the two frames of a flow pair.
struct CameraMotion {
  Vec3 t;
  Vec3 omega;
};

struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool contains(int px, int py) const { return px >= x && px < x + w && py >= y && py < y + h; }
};

/// Fronto-parallel billboard at a fixed depth.
struct SceneObject {
  PixelRect rect;
  double depth = 1.0;
  int class_id = 0;
  int instance_id = 1;
  Vec3 velocity;
  /// Region (image coordinates) where the flow estimator is assumed to fail;
  /// intersected with `rect` and rendered as invalid flow.
  std::optional<PixelRect> hole;
};

struct Background {
  enum class Kind { kPlane, kRamp };
  Kind kind = Kind::kPlane;
  double depth = 10.0;  // plane depth, or ramp depth at x = 0
  double slope = 0.0;   // ramp depth change per pixel column
  int class_id = 0;

  double depth_at(int x) const { return kind == Kind::kPlane ? depth : depth + slope * x; }
};

struct SkyBand {
  int rows = 0;  // top image rows labelled sky
  int class_id = 0;
};

struct SceneSpec {
  Background background;
  std::optional<SkyBand> sky;
  std::vector<SceneObject> objects;  // later objects occlude earlier ones
};

struct RenderedFrame {
  FlowField flow;
  PanopticMap seg;
  BinaryMask moving;  // ground truth
};

/// Exact flow for a pinhole camera between two frames. Rotation enters as the
/// first-order (small-angle) flow term; zoom scales the focal lengths.
/// Throws BehindCamera, InvalidArgument.
RenderedFrame render_flow(const SceneSpec& scene, const CameraIntrinsics& intr,
                          const CameraMotion& motion);

/// FoE of a purely translating (or zooming) camera. Throws RotationPresent,
/// NoMotion.
SignedFoe ground_truth_foe(const CameraIntrinsics& intr, const CameraMotion& motion);

struct SceneFile {
  std::string name = "frame";
  SceneSpec scene;
  CameraIntrinsics intrinsics;
  CameraMotion motion;
};

/// Line-oriented scene description; see README for the grammar.
SceneFile parse_scene(std::istream& in);
SceneFile load_scene(const std::filesystem::path& path);

}  // namespace foels
