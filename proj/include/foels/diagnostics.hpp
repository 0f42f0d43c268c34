#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "foels/pipeline.hpp"

namespace foels {

/// Jet colormap: blue at 0, red at 1.
RgbImage jet(const ProbabilityMap& map);

/// Stable pseudo-random color per class id.
RgbImage label_colors(const Grid<int>& labels);

/// Dimmed flow colors with sparse arrows, green for FoE inliers and red for
/// outliers, and a red cross on a finite FoE that falls inside the image.
RgbImage foe_panel(const FlowField& flow, const std::optional<FoeResult>& foe);

/// Red tint over `mask` pixels of `base`.
RgbImage overlay(const RgbImage& base, const BinaryMask& mask);

/// Writes `<stem>.mask.pgm` and `<stem>.report.txt` into out_dir; with
/// `diagnostics`, also the nine inspection panels. `frame` replaces the flow
/// colors as the overlay background when given.
void write_detection(const std::filesystem::path& out_dir, const std::string& stem,
                     const DetectionResult& result, const PanopticMap& seg, bool diagnostics,
                     const std::optional<RgbImage>& frame = std::nullopt);

}  // namespace foels
