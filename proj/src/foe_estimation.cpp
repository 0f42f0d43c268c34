#include "foels/foe_estimation.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace foels {
namespace {

double length(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

/// Precomputed form of a SignedFoe for repeated per-pixel evaluation.
class Model {
 public:
  explicit Model(const SignedFoe& foe)
      : infinite_(foe.is_infinite()),
        sign_(foe.sign),
        point_(infinite_ ? Vec2{} : foe.point()),
        direction_(foe.sign * foe.direction()) {}

  /// Expected unit direction at p, or nullopt when p sits on the FoE.
  std::optional<Vec2> expected(Vec2 p) const {
    if (infinite_) return direction_;
    const Vec2 d = p - point_;
    const double n = length(d);
    if (n < kAtFoeTolerance) return std::nullopt;
    return (sign_ / n) * d;
  }

  /// Deviation angle for a unit flow; NaN when p sits on the FoE.
  double deviation(Vec2 p, Vec2 unit_flow) const {
    const auto e = expected(p);
    if (!e) return std::numeric_limits<double>::quiet_NaN();
    double c = dot(*e, unit_flow);
    c = c < -1.0 ? -1.0 : (c > 1.0 ? 1.0 : c);
    return std::acos(c);
  }

  /// At-FoE pixels carry no evidence against the model and count as inliers.
  /// Compares cosines: acos is monotone, so dev < theta iff cos(dev) > cos(theta).
  bool agrees(Vec2 p, Vec2 unit_flow, double cos_theta) const {
    if (infinite_) return dot(direction_, unit_flow) > cos_theta;
    const Vec2 d = p - point_;
    const double n = length(d);
    if (n < kAtFoeTolerance) return true;
    return sign_ * dot(d, unit_flow) > cos_theta * n;
  }

 private:
  bool infinite_;
  int sign_;
  Vec2 point_;
  Vec2 direction_;
};

std::optional<SignedFoe> try_foe_from_pair(Vec2 p1, Vec2 f1, Vec2 p2, Vec2 f2, double min_mag) {
  const double n1 = length(f1);
  const double n2 = length(f2);
  if (p1 == p2 || !(n1 > 0.0) || !(n2 > 0.0) || n1 < min_mag || n2 < min_mag) {
    return std::nullopt;
  }

  const double det = cross(f1, f2);
  if (std::fabs(det) <= kParallelTolerance * n1 * n2) {
    if (dot(f1, f2) <= 0.0) return std::nullopt;
    // Bisector of the two (near-identical) directions keeps the result
    // independent of pair order.
    return SignedFoe::at_infinity((1.0 / n1) * f1 + (1.0 / n2) * f2);
  }

  // Homogeneous lines through p_i along f_i: (-v, u, x v - y u). Their cross
  // product is the intersection; its w component equals cross(f1, f2).
  const double a1 = -f1.y, b1 = f1.x, c1 = p1.x * f1.y - p1.y * f1.x;
  const double a2 = -f2.y, b2 = f2.x, c2 = p2.x * f2.y - p2.y * f2.x;
  const double hx = b1 * c2 - c1 * b2;
  const double hy = c1 * a2 - a1 * c2;
  const double hw = a1 * b2 - b1 * a2;
  const Vec2 e{hx / hw, hy / hw};

  const double o1 = dot(f1, p1 - e);
  const double o2 = dot(f2, p2 - e);
  int sign;
  if (o1 > 0.0 && o2 > 0.0) {
    sign = +1;
  } else if (o1 < 0.0 && o2 < 0.0) {
    sign = -1;
  } else {
    return std::nullopt;
  }
  return SignedFoe::finite(e, sign);
}

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection; unlike
/// std::uniform_int_distribution the sequence is identical on every platform.
std::size_t draw_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t n = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<std::size_t>(r % n);
}

}  // namespace

SignedFoe SignedFoe::finite(Vec2 point, int sign) {
  const double n = std::sqrt(point.x * point.x + point.y * point.y + 1.0);
  return {point.x / n, point.y / n, 1.0 / n, sign >= 0 ? +1 : -1};
}

SignedFoe SignedFoe::at_infinity(Vec2 direction) {
  const double n = length(direction);
  if (!(n > 0.0)) throw Error(ErrorCode::kDegenerate, "zero direction for a FoE at infinity");
  return {direction.x / n, direction.y / n, 0.0, +1};
}

SignedFoe foe_from_pair(Vec2 p1, Vec2 f1, Vec2 p2, Vec2 f2, double min_mag) {
  if (auto foe = try_foe_from_pair(p1, f1, p2, f2, min_mag)) return *foe;
  throw Error(ErrorCode::kDegenerate, "flow pair does not define a signed FoE");
}

Vec2 expected_direction(const SignedFoe& foe, Vec2 p) {
  if (auto e = Model(foe).expected(p)) return *e;
  throw Error(ErrorCode::kAtFoe, "pixel coincides with the FoE");
}

double angular_deviation(const SignedFoe& foe, Vec2 p, Vec2 f) {
  const double n = length(f);
  if (!(n > 0.0)) throw Error(ErrorCode::kZeroFlow, "flow vector has zero length");
  const double a = Model(foe).deviation(p, (1.0 / n) * f);
  if (std::isnan(a)) throw Error(ErrorCode::kAtFoe, "pixel coincides with the FoE");
  return a;
}

FoeResult ransac_foe(const FlowField& flow, const BinaryMask& static_area,
                     const RansacParams& params) {
  require_same_shape(flow.valid_mask(), static_area, "flow and static area differ in size");
  if (params.iterations < 1 || !(params.theta_inlier > 0.0) ||
      !(params.theta_inlier < std::numbers::pi) || !(params.min_mag >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad RANSAC parameters");
  }

  struct Sample {
    Vec2 position;
    Vec2 flow;
    Vec2 unit;
  };
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (!static_area[i] || !flow.valid(i)) continue;
    const Vec2 f = flow.at(i);
    const double n = length(f);
    if (n > params.min_mag && n > 0.0) samples.push_back({flow.u().position(i), f, (1.0 / n) * f});
  }
  if (samples.size() < 2) {
    throw Error(ErrorCode::kInsufficientFlow,
                std::to_string(samples.size()) + " qualifying static pixel(s)");
  }

  const double cos_theta = std::cos(params.theta_inlier);
  std::optional<SignedFoe> best;
  std::size_t best_support = 0;
  auto evaluate = [&](std::size_t i, std::size_t j) {
    const auto candidate = try_foe_from_pair(samples[i].position, samples[i].flow,
                                             samples[j].position, samples[j].flow, params.min_mag);
    if (!candidate) return;
    const Model model(*candidate);
    std::size_t support = 0;
    for (const auto& s : samples) support += model.agrees(s.position, s.unit, cos_theta);
    if (!best || support > best_support) {
      best = candidate;
      best_support = support;
    }
  };

  const auto iterations = static_cast<std::size_t>(params.iterations);
  if (params.exhaustive) {
    std::size_t visited = 0;
    for (std::size_t i = 0; i < samples.size() && visited < iterations; ++i) {
      for (std::size_t j = i + 1; j < samples.size() && visited < iterations; ++j, ++visited) {
        evaluate(i, j);
      }
    }
  } else {
    std::mt19937_64 rng(params.seed);
    for (std::size_t it = 0; it < iterations; ++it) {
      const std::size_t i = draw_index(rng, samples.size());
      std::size_t j = draw_index(rng, samples.size() - 1);
      if (j >= i) ++j;
      evaluate(i, j);
    }
  }
  if (!best || best_support < 2) {
    throw Error(ErrorCode::kNoConsensus, "best support " + std::to_string(best_support));
  }

  FoeResult result;
  result.foe = *best;
  result.consensus = best_support;
  result.qualifying = samples.size();
  result.inlier = BinaryMask(flow.width(), flow.height());
  const Model model(*best);
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (!flow.valid(i)) continue;
    const Vec2 f = flow.at(i);
    const double n = length(f);
    const bool inlier = n <= params.min_mag || !(n > 0.0) ||
                        model.agrees(flow.u().position(i), (1.0 / n) * f, cos_theta);
    result.inlier[i] = inlier;
    result.support += inlier;
  }
  return result;
}

}  // namespace foels
