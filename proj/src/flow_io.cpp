#include "foels/flow_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

namespace foels {
namespace {

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void store_le32(std::uint32_t value, std::vector<std::uint8_t>& out) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

float load_float(const std::uint8_t* p) { return std::bit_cast<float>(load_le32(p)); }

void store_float(float value, std::vector<std::uint8_t>& out) {
  store_le32(std::bit_cast<std::uint32_t>(value), out);
}

bool is_unknown(float u, float v) {
  return !(std::fabs(u) <= kUnknownFlowThreshold) || !(std::fabs(v) <= kUnknownFlowThreshold);
}

}  // namespace

void FlowField::set(std::size_t i, float u, float v) {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw Error(ErrorCode::kInvariantViolation, "valid flow must be finite");
  }
  u_[i] = u;
  v_[i] = v;
  valid_[i] = 1;
}

void FlowField::invalidate(std::size_t i) {
  u_[i] = 0.0f;
  v_[i] = 0.0f;
  valid_[i] = 0;
}

FlowField read_flo(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::kTruncated, "missing .flo sentinel");
  if (load_float(bytes.data()) != kFloMagic) {
    throw Error(ErrorCode::kBadMagic, "not a Middlebury .flo stream");
  }
  if (bytes.size() < 12) throw Error(ErrorCode::kTruncated, "missing .flo dimensions");
  const auto width = static_cast<std::int32_t>(load_le32(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(load_le32(bytes.data() + 8));
  if (width <= 0 || height <= 0 || width > kMaxFloDimension || height > kMaxFloDimension) {
    throw Error(ErrorCode::kBadDims,
                "bad .flo size " + std::to_string(width) + "x" + std::to_string(height));
  }
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  if (bytes.size() < 12 + 8 * pixels) {
    throw Error(ErrorCode::kTruncated, ".flo payload shorter than its header implies");
  }

  FlowField field(width, height);
  const std::uint8_t* p = bytes.data() + 12;
  for (std::size_t i = 0; i < pixels; ++i, p += 8) {
    const float u = load_float(p);
    const float v = load_float(p + 4);
    if (is_unknown(u, v)) {
      field.invalidate(i);
    } else {
      field.set(i, u, v);
    }
  }
  return field;
}

std::vector<std::uint8_t> write_flo(const FlowField& field) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + 8 * field.size());
  store_float(kFloMagic, out);
  store_le32(static_cast<std::uint32_t>(field.width()), out);
  store_le32(static_cast<std::uint32_t>(field.height()), out);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.valid(i)) {
      store_float(field.u()[i], out);
      store_float(field.v()[i], out);
    } else {
      store_float(kUnknownFlowValue, out);
      store_float(kUnknownFlowValue, out);
    }
  }
  return out;
}

FlowField load_flo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return read_flo(bytes);
}

void save_flo(const std::filesystem::path& path, const FlowField& field) {
  const auto bytes = write_flo(field);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

RgbImage flow_to_color(const FlowField& field) {
  std::vector<double> magnitudes;
  magnitudes.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.valid(i)) magnitudes.push_back(norm(field.at(i)));
  }
  double scale = 0.0;
  if (!magnitudes.empty()) {
    const auto rank = static_cast<std::size_t>(std::ceil(0.99 * magnitudes.size())) - 1;
    std::nth_element(magnitudes.begin(), magnitudes.begin() + rank, magnitudes.end());
    scale = magnitudes[rank];
  }
  if (scale <= 0.0) scale = 1.0;

  RgbImage image(field.width(), field.height());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.valid(i)) continue;  // black
    const Vec2 f = field.at(i);
    const double radius = norm(f) / scale;
    double hue = std::atan2(f.y, f.x) * 180.0 / std::numbers::pi;
    if (hue < 0.0) hue += 360.0;
    const double saturation = std::min(radius, 1.0);
    const double value = radius <= 1.0 ? 1.0 : 0.75;

    // HSV -> RGB
    const double c = value * saturation;
    const double h6 = hue / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(h6, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h6) % 6) {
      case 0: r = c; g = x; break;
      case 1: r = x; g = c; break;
      case 2: g = c; b = x; break;
      case 3: g = x; b = c; break;
      case 4: r = x; b = c; break;
      default: r = c; b = x; break;
    }
    const double m = value - c;
    auto to_byte = [](double channel) {
      return static_cast<std::uint8_t>(std::lround(std::clamp(channel, 0.0, 1.0) * 255.0));
    };
    image[i] = {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
  }
  return image;
}

double rgb_hue_degrees(Rgb color) {
  const double r = color.r / 255.0, g = color.g / 255.0, b = color.b / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double delta = hi - lo;
  if (delta == 0.0) return 0.0;
  double hue;
  if (hi == r) {
    hue = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (hi == g) {
    hue = 60.0 * ((b - r) / delta + 2.0);
  } else {
    hue = 60.0 * ((r - g) / delta + 4.0);
  }
  return hue < 0.0 ? hue + 360.0 : hue;
}

}  // namespace foels
