#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include "foels/camera_motion.hpp"
#include "foels/foe_estimation.hpp"
#include "foels/moving_probability.hpp"
#include "foels/object_refinement.hpp"
#include "foels/segmentation_prior.hpp"

namespace foels {

/// Every threshold of the detector. Angles are radians here and degrees in
/// the configuration file.
struct DetectorConfig {
  double tau_static = 0.3;
  double tau_move = 0.1;
  double eps_mag = 0.5;
  double min_mag = 0.5;
  double alpha = 0.25;
  double theta_th = std::numbers::pi / 6.0;
  double theta_inlier = std::numbers::pi / 6.0;
  int iterations = 512;
  std::uint64_t seed = 0;
  double tau_pixel = 0.25;
  double tau_obj = 0.01;
  double m_stop = 1.0;
  double eps_len = 1e-3;
  double fl_cap = 4.0;

  RansacParams ransac() const;
  LikelihoodParams likelihood() const;
  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

/// `key value` lines, `#` comments. Unlisted keys keep their defaults.
DetectorConfig parse_config(std::istream& in);
DetectorConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const DetectorConfig& config);

struct DetectionResult {
  FlowField flow;  // input flow with sky pixels invalidated
  BinaryMask sky;
  ProbabilityMap prior;
  BinaryMask static_area;
  std::optional<double> flow_ratio;  // empty when the static area has no flow
  bool camera_moving = false;
  std::optional<FoeResult> foe;
  ProbabilityMap likelihood;
  ProbabilityMap posterior;
  BinaryMask pixels;
  BinaryMask objects;  // final output
  std::string note;    // set when a fallback path was taken
};

/// Runs the whole per-frame detector: sky removal, prior, static area,
/// camera-motion gate, FoE/likelihood (or the still-camera likelihood),
/// posterior, pixel mask and object refinement.
DetectionResult detect_frame(FlowField flow, const PanopticMap& seg, const ClassPriorTable& table,
                             const DetectorConfig& config);

/// Plain-text frame summary (camera state, FoE, support counts).
std::string format_report(const DetectionResult& result);

}  // namespace foels
