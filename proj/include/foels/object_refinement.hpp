#pragma once

#include "foels/segmentation_prior.hpp"

namespace foels {

/// posterior >= tau_pixel
BinaryMask pixel_mask(const ProbabilityMap& posterior, double tau_pixel);

/// Promotes each instance (id > 0) to wholly moving when its moving fraction
/// exceeds tau_obj, and clears it otherwise. Stuff pixels (id 0) keep their
/// pixel-level value.
BinaryMask object_mask(const BinaryMask& pixels, const PanopticMap& seg, double tau_obj);

}  // namespace foels
