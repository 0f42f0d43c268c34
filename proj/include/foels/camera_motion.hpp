#pragma once

#include "foels/flow_io.hpp"

namespace foels {

/// Fraction of valid static-area pixels whose flow magnitude exceeds eps_mag.
/// Throws EmptyStaticArea when the static area holds no valid flow.
double flow_existing_ratio(const FlowField& flow, const BinaryMask& static_area, double eps_mag);

inline bool is_camera_moving(double ratio, double tau_move) { return ratio > tau_move; }

}  // namespace foels
