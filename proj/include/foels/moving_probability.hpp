#pragma once

#include <numbers>

#include "foels/foe_estimation.hpp"

namespace foels {

struct LikelihoodParams {
  double alpha = 0.25;                      // weight of the length factor
  double theta_th = std::numbers::pi / 6.0;  // angle at which P_a reaches 0.5
  double eps_len = 1e-3;                    // floor for the relative length
  double fl_cap = 4.0;                      // cap for the length factor
  double m_stop = 1.0;                      // px; saturation scale for a still camera
  double eps_mag = 0.5;                     // px; static flow counted in the mean
  double min_mag = 0.5;                     // px; shorter flow carries no evidence
};

/// clip(0.5 d_a / theta_th)
double angle_probability(double d_a, double theta_th);

/// max(mag / mean_static_mag, eps_len). Throws ZeroStaticFlow.
double relative_length(double mag, double mean_static_mag, double eps_len);

/// min(|log10 d_l|, fl_cap)
double length_factor(double d_l, double fl_cap);

/// clip(P_a + alpha F_l)
double foe_likelihood(double p_a, double f_l, double alpha);

/// Mean flow magnitude over valid static-area pixels above eps_mag, or 0 when
/// there are none.
double mean_static_magnitude(const FlowField& flow, const BinaryMask& static_area, double eps_mag);

/// FoE-based moving likelihood for a moving camera. Short flow, pixels on the
/// FoE and invalid pixels get 0. Throws ZeroStaticFlow.
ProbabilityMap likelihood_map(const FlowField& flow, const SignedFoe& foe,
                              const BinaryMask& static_area, const LikelihoodParams& params);

/// Likelihood for a still camera: clip(|f| / m_stop).
ProbabilityMap static_camera_likelihood(const FlowField& flow, const LikelihoodParams& params);

/// Pointwise product prior * likelihood. Throws DimensionMismatch.
ProbabilityMap posterior_map(const ProbabilityMap& prior, const ProbabilityMap& likelihood);

}  // namespace foels
