#include "foels/object_refinement.hpp"

#include <unordered_map>

namespace foels {

BinaryMask pixel_mask(const ProbabilityMap& posterior, double tau_pixel) {
  if (!(tau_pixel > 0.0 && tau_pixel < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau_pixel must lie in (0, 1)");
  }
  BinaryMask mask(posterior.width(), posterior.height());
  for (std::size_t i = 0; i < posterior.size(); ++i) mask[i] = posterior[i] >= tau_pixel;
  return mask;
}

BinaryMask object_mask(const BinaryMask& pixels, const PanopticMap& seg, double tau_obj) {
  require_same_shape(pixels, seg.instance_id, "pixel mask and panoptic map differ in size");

  struct Count {
    std::size_t moving = 0;
    std::size_t total = 0;
  };
  std::unordered_map<int, Count> counts;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const int id = seg.instance_id[i];
    if (id <= 0) continue;
    auto& c = counts[id];
    ++c.total;
    c.moving += pixels[i] != 0;
  }

  BinaryMask out = pixels;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const int id = seg.instance_id[i];
    if (id <= 0) continue;
    const Count& c = counts.at(id);
    out[i] = static_cast<double>(c.moving) / static_cast<double>(c.total) > tau_obj;
  }
  return out;
}

}  // namespace foels
