#include "foels/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "foels/image_io.hpp"

namespace foels {
namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

void put(RgbImage& image, int x, int y, Rgb color) {
  if (x >= 0 && y >= 0 && x < image.width() && y < image.height()) image(x, y) = color;
}

void draw_line(RgbImage& image, int x0, int y0, int x1, int y1, Rgb color) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    put(image, x0, y0, color);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) { err += dy; x0 += sx; }
    if (e2 <= dx) { err += dx; y0 += sy; }
  }
}

void draw_arrow(RgbImage& image, Vec2 from, Vec2 to, Rgb color) {
  const int x0 = static_cast<int>(std::lround(from.x)), y0 = static_cast<int>(std::lround(from.y));
  const int x1 = static_cast<int>(std::lround(to.x)), y1 = static_cast<int>(std::lround(to.y));
  draw_line(image, x0, y0, x1, y1, color);
  const Vec2 d = from - to;
  const double n = norm(d);
  if (n < 2.0) return;
  const double head = std::min(4.0, 0.35 * n);
  for (double angle : {0.5, -0.5}) {
    const double c = std::cos(angle), s = std::sin(angle);
    const Vec2 r{(c * d.x - s * d.y) / n, (s * d.x + c * d.y) / n};
    draw_line(image, x1, y1, static_cast<int>(std::lround(to.x + head * r.x)),
              static_cast<int>(std::lround(to.y + head * r.y)), color);
  }
}

}  // namespace

RgbImage jet(const ProbabilityMap& map) {
  RgbImage image(map.width(), map.height());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double p = clip01(map[i]);
    image[i] = {to_byte(1.5 - std::fabs(4.0 * p - 3.0)), to_byte(1.5 - std::fabs(4.0 * p - 2.0)),
                to_byte(1.5 - std::fabs(4.0 * p - 1.0))};
  }
  return image;
}

RgbImage label_colors(const Grid<int>& labels) {
  RgbImage image(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto h = static_cast<std::uint32_t>(labels[i]) * 2654435761u;
    h ^= h >> 15;
    image[i] = {static_cast<std::uint8_t>(64 + (h & 0xbf)),
                static_cast<std::uint8_t>(64 + ((h >> 8) & 0xbf)),
                static_cast<std::uint8_t>(64 + ((h >> 16) & 0xbf))};
  }
  return image;
}

RgbImage foe_panel(const FlowField& flow, const std::optional<FoeResult>& foe) {
  RgbImage image = flow_to_color(flow);
  for (auto& c : image.values()) {
    c = {static_cast<std::uint8_t>(128 + c.r / 4), static_cast<std::uint8_t>(128 + c.g / 4),
         static_cast<std::uint8_t>(128 + c.b / 4)};
  }

  const int stride = std::max(8, std::max(flow.width(), flow.height()) / 40);
  double longest = 0.0;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (flow.valid(i)) longest = std::max(longest, norm(flow.at(i)));
  }
  const double scale = longest > 0.0 ? 0.9 * stride / longest : 0.0;

  const Rgb green{0, 170, 0}, red{220, 0, 0};
  for (int y = stride / 2; y < flow.height(); y += stride) {
    for (int x = stride / 2; x < flow.width(); x += stride) {
      const std::size_t i = flow.u().index(x, y);
      if (!flow.valid(i)) continue;
      const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
      const bool inlier = !foe || foe->inlier[i];
      draw_arrow(image, p, p + scale * flow.at(i), inlier ? green : red);
    }
  }

  if (foe && !foe->foe.is_infinite()) {
    const Vec2 e = foe->foe.point();
    const int cx = static_cast<int>(std::lround(e.x)), cy = static_cast<int>(std::lround(e.y));
    const int arm = std::max(4, stride);
    for (int t = -1; t <= 1; ++t) {
      draw_line(image, cx - arm, cy - arm + t, cx + arm, cy + arm + t, red);
      draw_line(image, cx - arm, cy + arm + t, cx + arm, cy - arm + t, red);
    }
  }
  return image;
}

RgbImage overlay(const RgbImage& base, const BinaryMask& mask) {
  require_same_shape(base, mask, "overlay base and mask differ in size");
  RgbImage image = base;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!mask[i]) continue;
    const Rgb c = image[i];
    image[i] = {static_cast<std::uint8_t>((c.r + 255) / 2), static_cast<std::uint8_t>(c.g / 2),
                static_cast<std::uint8_t>(c.b / 2)};
  }
  return image;
}

void write_detection(const std::filesystem::path& out_dir, const std::string& stem,
                     const DetectionResult& r, const PanopticMap& seg, bool diagnostics,
                     const std::optional<RgbImage>& frame) {
  std::filesystem::create_directories(out_dir);
  auto path = [&](const char* suffix) { return out_dir / (stem + suffix); };

  save_pgm8(path(".mask.pgm"), mask_to_gray(r.objects));
  const std::string report = format_report(r);
  write_file(path(".report.txt"), std::span(reinterpret_cast<const std::uint8_t*>(report.data()),
                                            report.size()));
  if (!diagnostics) return;

  const RgbImage flow_colors = flow_to_color(r.flow);
  save_png(path(".segmentation.png"), label_colors(seg.class_id));
  save_pgm8(path(".prior.pgm"), probability_to_gray(r.prior));
  save_png(path(".prior.png"), jet(r.prior));
  save_png(path(".flow.png"), flow_colors);
  save_png(path(".foe.png"), foe_panel(r.flow, r.foe));
  save_pgm8(path(".likelihood.pgm"), probability_to_gray(r.likelihood));
  save_png(path(".likelihood.png"), jet(r.likelihood));
  save_pgm8(path(".posterior.pgm"), probability_to_gray(r.posterior));
  save_png(path(".posterior.png"), jet(r.posterior));
  save_pgm8(path(".pixels.pgm"), mask_to_gray(r.pixels));
  save_pgm8(path(".objects.pgm"), mask_to_gray(r.objects));
  const RgbImage& base = frame && frame->same_shape(r.objects) ? *frame : flow_colors;
  save_png(path(".overlay.png"), overlay(base, r.objects));
}

}  // namespace foels
