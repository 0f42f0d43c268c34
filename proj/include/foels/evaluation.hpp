#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "foels/image.hpp"

namespace foels {

/// |pred & gt| / |pred | gt|; two empty masks score 1.
double frame_iou(const BinaryMask& pred, const BinaryMask& gt);

/// Mean over the frames of one sequence. Throws EmptyScene.
double scene_iou(std::span<const double> frame_scores);

/// Mean over scene means, so every scene weighs the same regardless of its
/// frame count. Throws EmptyDataset.
double dataset_iou(std::span<const double> scene_scores);

/// One scene name per line; `#` comments and blank lines are ignored.
std::vector<std::string> load_scene_list(const std::filesystem::path& path);

struct FrameScore {
  std::string scene;
  std::string frame;
  double iou = 0.0;
};

struct SceneScore {
  std::string scene;
  std::size_t frames = 0;
  double iou = 0.0;
};

struct EvaluationReport {
  std::vector<FrameScore> frames;
  std::vector<SceneScore> scenes;
  double dataset = 0.0;
  /// Ground-truth frames without a prediction; they are not scored.
  std::vector<std::string> missing;
};

/// Scores `<pred_root>/<scene>/<frame>.{mask.pgm,pgm,png}` against
/// `<gt_root>/<scene>/<frame>[.gt].{png,pgm}`; other files in the scene
/// directory are ignored. Scenes default to every directory
/// under gt_root; `exclude` removes names from that set.
EvaluationReport evaluate_directories(const std::filesystem::path& pred_root,
                                      const std::filesystem::path& gt_root,
                                      const std::vector<std::string>& scenes,
                                      const std::vector<std::string>& exclude);

/// `scene,frame,iou` rows, then one `<scene>,__scene__,<iou>` row per scene
/// and a final `__dataset__,,<iou>` summary row.
void write_csv(std::ostream& out, const EvaluationReport& report);

}  // namespace foels
