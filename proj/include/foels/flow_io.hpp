#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "foels/image.hpp"

namespace foels {

/// Dense optical flow in pixels/frame. Invalid pixels (unknown flow, removed
/// sky) hold u = v = 0 and carry no motion evidence.
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height)
      : u_(width, height, 0.0f), v_(width, height, 0.0f), valid_(width, height, 1) {}

  int width() const { return u_.width(); }
  int height() const { return u_.height(); }
  std::size_t size() const { return u_.size(); }

  Vec2 at(std::size_t i) const { return {u_[i], v_[i]}; }
  Vec2 at(int x, int y) const { return at(u_.index(x, y)); }
  bool valid(std::size_t i) const { return valid_[i] != 0; }

  /// Stores a valid flow vector; non-finite components are rejected.
  void set(std::size_t i, float u, float v);
  void set(int x, int y, float u, float v) { set(u_.index(x, y), u, v); }
  void invalidate(std::size_t i);

  const Grid<float>& u() const { return u_; }
  const Grid<float>& v() const { return v_; }
  const BinaryMask& valid_mask() const { return valid_; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  Grid<float> u_;
  Grid<float> v_;
  BinaryMask valid_;
};

/// Middlebury sentinel and unknown-flow conventions.
inline constexpr float kFloMagic = 202021.25f;
inline constexpr float kUnknownFlowThreshold = 1e9f;
inline constexpr float kUnknownFlowValue = 1e10f;
inline constexpr int kMaxFloDimension = 32768;

FlowField read_flo(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_flo(const FlowField& field);

FlowField load_flo(const std::filesystem::path& path);
void save_flo(const std::filesystem::path& path, const FlowField& field);

/// Color-wheel rendering: hue follows the flow direction, saturation grows
/// with magnitude up to the 99th-percentile magnitude, beyond which the color
/// is darkened. Zero flow is white, invalid pixels are black.
RgbImage flow_to_color(const FlowField& field);

/// Hue in degrees [0, 360) of an RGB color; used to check the color wheel.
double rgb_hue_degrees(Rgb color);

}  // namespace foels
