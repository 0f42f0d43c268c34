#include "foels/moving_probability.hpp"

#include <algorithm>
#include <cmath>

namespace foels {

double angle_probability(double d_a, double theta_th) {
  if (!(theta_th > 0.0 && theta_th < std::numbers::pi)) {
    throw Error(ErrorCode::kInvalidArgument, "theta_th must lie in (0, pi)");
  }
  return clip01(0.5 * d_a / theta_th);
}

double relative_length(double mag, double mean_static_mag, double eps_len) {
  if (!(mean_static_mag > 0.0)) {
    throw Error(ErrorCode::kZeroStaticFlow, "mean static flow magnitude is zero");
  }
  return std::max(mag / mean_static_mag, eps_len);
}

double length_factor(double d_l, double fl_cap) {
  return std::min(std::fabs(std::log10(d_l)), fl_cap);
}

double foe_likelihood(double p_a, double f_l, double alpha) { return clip01(p_a + alpha * f_l); }

double mean_static_magnitude(const FlowField& flow, const BinaryMask& static_area, double eps_mag) {
  require_same_shape(flow.valid_mask(), static_area, "flow and static area differ in size");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (!static_area[i] || !flow.valid(i)) continue;
    const double m = norm(flow.at(i));
    if (m > eps_mag) {
      sum += m;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

ProbabilityMap likelihood_map(const FlowField& flow, const SignedFoe& foe,
                              const BinaryMask& static_area, const LikelihoodParams& params) {
  const double mean = mean_static_magnitude(flow, static_area, params.eps_mag);
  if (!(mean > 0.0)) {
    throw Error(ErrorCode::kZeroStaticFlow, "no static flow above eps_mag");
  }

  ProbabilityMap map(flow.width(), flow.height());
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (!flow.valid(i)) continue;
    const Vec2 f = flow.at(i);
    const double mag = norm(f);
    if (mag <= params.min_mag || !(mag > 0.0)) continue;
    double d_a;
    try {
      d_a = angular_deviation(foe, flow.u().position(i), f);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAtFoe) throw;
      continue;
    }
    const double p_a = angle_probability(d_a, params.theta_th);
    const double f_l = length_factor(relative_length(mag, mean, params.eps_len), params.fl_cap);
    map[i] = foe_likelihood(p_a, f_l, params.alpha);
  }
  return map;
}

ProbabilityMap static_camera_likelihood(const FlowField& flow, const LikelihoodParams& params) {
  if (!(params.m_stop > 0.0)) throw Error(ErrorCode::kInvalidArgument, "m_stop must be positive");
  ProbabilityMap map(flow.width(), flow.height());
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (flow.valid(i)) map[i] = clip01(norm(flow.at(i)) / params.m_stop);
  }
  return map;
}

ProbabilityMap posterior_map(const ProbabilityMap& prior, const ProbabilityMap& likelihood) {
  require_same_shape(prior, likelihood, "prior and likelihood differ in size");
  ProbabilityMap map(prior.width(), prior.height());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = prior[i] * likelihood[i];
  return map;
}

}  // namespace foels
