#include "foels/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace foels {
namespace {

constexpr double kDegrees = 180.0 / std::numbers::pi;

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

template <typename T>
T parse_value(const std::string& key, const std::string& token) {
  T value{};
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kParseError, "bad value '" + token + "' for " + key);
  }
  return value;
}

}  // namespace

RansacParams DetectorConfig::ransac() const {
  RansacParams p;
  p.iterations = iterations;
  p.theta_inlier = theta_inlier;
  p.min_mag = min_mag;
  p.seed = seed;
  return p;
}

LikelihoodParams DetectorConfig::likelihood() const {
  LikelihoodParams p;
  p.alpha = alpha;
  p.theta_th = theta_th;
  p.eps_len = eps_len;
  p.fl_cap = fl_cap;
  p.m_stop = m_stop;
  p.eps_mag = eps_mag;
  p.min_mag = min_mag;
  return p;
}

void DetectorConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  check(open_unit(tau_static), "tau_static must lie in (0, 1)");
  check(open_unit(tau_move), "tau_move must lie in (0, 1)");
  check(open_unit(tau_pixel), "tau_pixel must lie in (0, 1)");
  check(tau_obj >= 0.0 && tau_obj < 1.0, "tau_obj must lie in [0, 1)");
  check(eps_mag >= 0.0 && min_mag >= 0.0, "eps_mag and min_mag must be non-negative");
  check(alpha >= 0.0, "alpha must be non-negative");
  check(theta_th > 0.0 && theta_th < std::numbers::pi, "theta_th must lie in (0, 180) degrees");
  check(theta_inlier > 0.0 && theta_inlier < std::numbers::pi,
        "theta_inlier must lie in (0, 180) degrees");
  check(iterations >= 1, "iterations must be at least 1");
  check(m_stop > 0.0 && eps_len > 0.0 && fl_cap > 0.0, "m_stop, eps_len, fl_cap must be positive");
}

DetectorConfig parse_config(std::istream& in) {
  DetectorConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 'key value'");
    }
    if (key == "tau_static") c.tau_static = parse_value<double>(key, value);
    else if (key == "tau_move") c.tau_move = parse_value<double>(key, value);
    else if (key == "eps_mag") c.eps_mag = parse_value<double>(key, value);
    else if (key == "min_mag") c.min_mag = parse_value<double>(key, value);
    else if (key == "alpha") c.alpha = parse_value<double>(key, value);
    else if (key == "theta_th") c.theta_th = parse_value<double>(key, value) / kDegrees;
    else if (key == "theta_inlier") c.theta_inlier = parse_value<double>(key, value) / kDegrees;
    else if (key == "iterations") c.iterations = parse_value<int>(key, value);
    else if (key == "seed") c.seed = parse_value<std::uint64_t>(key, value);
    else if (key == "tau_pixel") c.tau_pixel = parse_value<double>(key, value);
    else if (key == "tau_obj") c.tau_obj = parse_value<double>(key, value);
    else if (key == "m_stop") c.m_stop = parse_value<double>(key, value);
    else if (key == "eps_len") c.eps_len = parse_value<double>(key, value);
    else if (key == "fl_cap") c.fl_cap = parse_value<double>(key, value);
    else throw Error(ErrorCode::kParseError, "unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

DetectorConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const DetectorConfig& c) {
  out << "# static area: prior below tau_static\n"
      << "tau_static " << format_double(c.tau_static) << '\n'
      << "# camera moving when this fraction of static pixels has flow above eps_mag\n"
      << "tau_move " << format_double(c.tau_move) << '\n'
      << "eps_mag " << format_double(c.eps_mag) << '\n'
      << "# RANSAC\n"
      << "min_mag " << format_double(c.min_mag) << '\n'
      << "theta_inlier " << format_double(c.theta_inlier * kDegrees) << '\n'
      << "iterations " << c.iterations << '\n'
      << "seed " << c.seed << '\n'
      << "# likelihood (angles in degrees)\n"
      << "alpha " << format_double(c.alpha) << '\n'
      << "theta_th " << format_double(c.theta_th * kDegrees) << '\n'
      << "eps_len " << format_double(c.eps_len) << '\n'
      << "fl_cap " << format_double(c.fl_cap) << '\n'
      << "m_stop " << format_double(c.m_stop) << '\n'
      << "# masks\n"
      << "tau_pixel " << format_double(c.tau_pixel) << '\n'
      << "tau_obj " << format_double(c.tau_obj) << '\n';
}

DetectionResult detect_frame(FlowField flow, const PanopticMap& seg, const ClassPriorTable& table,
                             const DetectorConfig& config) {
  config.validate();
  require_same_shape(flow.valid_mask(), seg.class_id, "flow and panoptic map differ in size");
  require_same_shape(seg.class_id, seg.instance_id, "class and instance maps differ in size");

  DetectionResult r;
  r.sky = sky_mask(seg, table);
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (r.sky[i]) flow.invalidate(i);
  }
  r.prior = prior_map(seg, table);
  r.static_area = static_mask(r.prior, config.tau_static);

  try {
    r.flow_ratio = flow_existing_ratio(flow, r.static_area, config.eps_mag);
    r.camera_moving = is_camera_moving(*r.flow_ratio, config.tau_move);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyStaticArea) throw;
    r.camera_moving = false;
    r.note = "no valid flow in the static area; camera assumed still";
  }

  const LikelihoodParams lp = config.likelihood();
  if (r.camera_moving) {
    try {
      r.foe = ransac_foe(flow, r.static_area, config.ransac());
      r.likelihood = likelihood_map(flow, r.foe->foe, r.static_area, lp);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientFlow && e.code() != ErrorCode::kNoConsensus) throw;
      r.foe.reset();
      r.likelihood = ProbabilityMap(flow.width(), flow.height());
      r.note = std::string("no FoE (") + e.what() + "); likelihood set to zero";
    }
  } else {
    r.likelihood = static_camera_likelihood(flow, lp);
  }

  r.posterior = posterior_map(r.prior, r.likelihood);
  r.pixels = pixel_mask(r.posterior, config.tau_pixel);
  r.objects = object_mask(r.pixels, seg, config.tau_obj);
  r.flow = std::move(flow);
  return r;
}

std::string format_report(const DetectionResult& r) {
  std::ostringstream out;
  out << "size " << r.flow.width() << ' ' << r.flow.height() << '\n';
  out << "static_pixels " << count_true(r.static_area) << '\n';
  out << "flow_ratio " << (r.flow_ratio ? format_double(*r.flow_ratio) : "none") << '\n';
  out << "camera " << (r.camera_moving ? "moving" : "still") << '\n';
  if (r.foe) {
    const auto& foe = r.foe->foe;
    if (foe.is_infinite()) {
      out << "foe infinite " << format_double(foe.hx) << ' ' << format_double(foe.hy) << '\n';
    } else {
      const Vec2 e = foe.point();
      out << "foe finite " << format_double(e.x) << ' ' << format_double(e.y) << '\n';
    }
    out << "foe_sign " << (foe.sign > 0 ? "+1" : "-1") << '\n';
    out << "consensus " << r.foe->consensus << " of " << r.foe->qualifying << '\n';
    out << "inliers " << r.foe->support << '\n';
  } else {
    out << "foe none\n";
  }
  out << "moving_pixels " << count_true(r.pixels) << '\n';
  out << "moving_output " << count_true(r.objects) << '\n';
  if (!r.note.empty()) out << "note " << r.note << '\n';
  return out.str();
}

}  // namespace foels
