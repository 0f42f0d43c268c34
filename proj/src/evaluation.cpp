#include "foels/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "foels/image_io.hpp"

namespace foels {
namespace fs = std::filesystem;

double frame_iou(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "prediction and ground truth differ in size");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool g = gt[i] != 0;
    inter += p && g;
    uni += p || g;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double scene_iou(std::span<const double> frame_scores) {
  if (frame_scores.empty()) throw Error(ErrorCode::kEmptyScene, "no frames to average");
  return std::accumulate(frame_scores.begin(), frame_scores.end(), 0.0) /
         static_cast<double>(frame_scores.size());
}

double dataset_iou(std::span<const double> scene_scores) {
  if (scene_scores.empty()) throw Error(ErrorCode::kEmptyDataset, "no scenes to average");
  return std::accumulate(scene_scores.begin(), scene_scores.end(), 0.0) /
         static_cast<double>(scene_scores.size());
}

std::vector<std::string> load_scene_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    names.push_back(line.substr(begin, end - begin + 1));
  }
  return names;
}

EvaluationReport evaluate_directories(const fs::path& pred_root, const fs::path& gt_root,
                                      const std::vector<std::string>& scenes,
                                      const std::vector<std::string>& exclude) {
  if (!fs::is_directory(gt_root)) throw Error(ErrorCode::kFileNotFound, gt_root.string());
  if (!fs::is_directory(pred_root)) throw Error(ErrorCode::kFileNotFound, pred_root.string());

  std::vector<std::string> names = scenes;
  if (names.empty()) {
    for (const auto& entry : fs::directory_iterator(gt_root)) {
      if (entry.is_directory()) names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
  }
  const std::set<std::string> excluded(exclude.begin(), exclude.end());

  EvaluationReport report;
  std::vector<double> scene_means;
  for (const auto& scene : names) {
    if (excluded.contains(scene)) continue;
    const fs::path gt_dir = gt_root / scene;
    if (!fs::is_directory(gt_dir)) throw Error(ErrorCode::kFileNotFound, gt_dir.string());

    // <frame>.png|pgm or <frame>.gt.png|pgm; label maps and other companions
    // sharing the directory are skipped.
    std::vector<fs::path> gt_files;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
      const std::string name = entry.path().filename().string();
      const auto dot = name.find('.');
      const std::string suffix = dot == std::string::npos ? "" : name.substr(dot);
      if (entry.is_regular_file() &&
          (suffix == ".png" || suffix == ".pgm" || suffix == ".gt.png" || suffix == ".gt.pgm")) {
        gt_files.push_back(entry.path());
      }
    }
    std::sort(gt_files.begin(), gt_files.end());

    std::vector<double> scores;
    for (const auto& gt_file : gt_files) {
      const std::string filename = gt_file.filename().string();
      const std::string frame = filename.substr(0, filename.find('.'));
      fs::path pred_file;
      for (const char* suffix : {".mask.pgm", ".pgm", ".png"}) {
        const fs::path candidate = pred_root / scene / (frame + suffix);
        if (fs::is_regular_file(candidate)) {
          pred_file = candidate;
          break;
        }
      }
      if (pred_file.empty()) {
        report.missing.push_back(scene + "/" + frame);
        continue;
      }
      const double iou = frame_iou(load_mask(pred_file), load_mask(gt_file));
      report.frames.push_back({scene, frame, iou});
      scores.push_back(iou);
    }
    if (scores.empty()) continue;
    const double mean = scene_iou(scores);
    report.scenes.push_back({scene, scores.size(), mean});
    scene_means.push_back(mean);
  }
  report.dataset = dataset_iou(scene_means);
  return report;
}

void write_csv(std::ostream& out, const EvaluationReport& report) {
  char buffer[32];
  auto fmt = [&](double v) {
    std::snprintf(buffer, sizeof buffer, "%.6f", v);
    return std::string(buffer);
  };
  out << "scene,frame,iou\n";
  for (const auto& f : report.frames) out << f.scene << ',' << f.frame << ',' << fmt(f.iou) << '\n';
  for (const auto& s : report.scenes) out << s.scene << ",__scene__," << fmt(s.iou) << '\n';
  out << "__dataset__,," << fmt(report.dataset) << '\n';
}

}  // namespace foels
