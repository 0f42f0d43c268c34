#pragma once

#include <cstdint>
#include <numbers>

#include "foels/flow_io.hpp"

namespace foels {

/// Focus of expansion in homogeneous image coordinates plus its orientation.
///
/// Canonical form: (hx, hy, hw) has unit norm and hw >= 0. hw == 0 encodes a
/// FoE at infinity (parallel flow); there (hx, hy) is the unit flow direction
/// and sign is fixed to +1, since source and sink cannot be told apart.
struct SignedFoe {
  double hx = 0.0;
  double hy = 0.0;
  double hw = 1.0;
  int sign = +1;  // +1 source (expansion), -1 sink (contraction)

  static SignedFoe finite(Vec2 point, int sign);
  static SignedFoe at_infinity(Vec2 direction);

  bool is_infinite() const { return hw == 0.0; }
  /// Euclidean position; meaningful only for a finite FoE.
  Vec2 point() const { return {hx / hw, hy / hw}; }
  /// Unit direction of a FoE at infinity.
  Vec2 direction() const { return {hx, hy}; }

  friend bool operator==(const SignedFoe&, const SignedFoe&) = default;
};

struct RansacParams {
  int iterations = 512;
  double theta_inlier = std::numbers::pi / 6.0;
  double min_mag = 0.5;
  std::uint64_t seed = 0;
  /// Enumerate pixel pairs in index order instead of sampling them; at most
  /// `iterations` pairs are visited.
  bool exhaustive = false;
};

struct FoeResult {
  SignedFoe foe;
  BinaryMask inlier;           // over every valid pixel
  std::size_t support = 0;     // number of true pixels in `inlier`
  std::size_t consensus = 0;   // static-area qualifying pixels that agree with `foe`
  std::size_t qualifying = 0;  // static-area pixels with valid flow above min_mag
};

/// Distance below which a pixel is considered to sit on a finite FoE.
inline constexpr double kAtFoeTolerance = 1e-9;
/// |sin| of the angle between two flows below which they count as parallel.
inline constexpr double kParallelTolerance = 1e-9;

/// Intersection of the lines carried by two flow vectors, with the sign read
/// off the flow orientations. Throws Degenerate for mixed source/sink pairs,
/// short flows (below min_mag), coincident positions or opposed parallel flows.
SignedFoe foe_from_pair(Vec2 p1, Vec2 f1, Vec2 p2, Vec2 f2, double min_mag = 0.0);

/// Unit direction a static pixel at p should move in. Throws AtFoe.
Vec2 expected_direction(const SignedFoe& foe, Vec2 p);

/// Angle in [0, pi] between the observed flow and the expected direction.
/// Throws ZeroFlow or AtFoe.
double angular_deviation(const SignedFoe& foe, Vec2 p, Vec2 f);

/// Robust signed-FoE estimate from static-area flow. Throws InsufficientFlow
/// (fewer than two qualifying pixels) or NoConsensus (best support below 2).
FoeResult ransac_foe(const FlowField& flow, const BinaryMask& static_area,
                     const RansacParams& params);

}  // namespace foels
