#include "foels/camera_motion.hpp"

namespace foels {

double flow_existing_ratio(const FlowField& flow, const BinaryMask& static_area, double eps_mag) {
  require_same_shape(flow.valid_mask(), static_area, "flow and static area differ in size");
  std::size_t total = 0;
  std::size_t moving = 0;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (!static_area[i] || !flow.valid(i)) continue;
    ++total;
    moving += norm(flow.at(i)) > eps_mag;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyStaticArea, "no valid flow in the static area");
  return static_cast<double>(moving) / static_cast<double>(total);
}

}  // namespace foels
