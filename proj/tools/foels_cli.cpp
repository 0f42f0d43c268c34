// foels: moving-object detection from dense optical flow and panoptic labels.
//
//   foels detect --flow F.flo --class F.class.pgm --inst F.inst.pgm --table T --out DIR
//   foels detect --batch DIR --table T --out DIR
//   foels eval   --pred DIR --gt DIR [--scenes LIST] [--exclude LIST] [--csv FILE]
//   foels synth  --spec SCENE --out DIR
//
// Exit status: 0 success, 1 input error, 2 internal invariant failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "foels/diagnostics.hpp"
#include "foels/evaluation.hpp"
#include "foels/image_io.hpp"
#include "foels/pipeline.hpp"
#include "foels/synth_scene.hpp"

namespace fs = std::filesystem;
using namespace foels;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct DetectOptions {
  std::string flow, class_map, instance_map, table, out, batch, name, config, frame;
  std::optional<std::uint64_t> seed;
  bool diagnostics = false;
  bool print_config = false;
};

struct EvalOptions {
  std::string pred, gt, scenes, exclude, csv;
};

struct SynthOptions {
  std::string spec, out;
};

DetectorConfig effective_config(const DetectOptions& opt) {
  DetectorConfig config = opt.config.empty() ? DetectorConfig{} : load_config(opt.config);
  if (opt.seed) config.seed = *opt.seed;
  config.validate();
  return config;
}

void detect_one(const fs::path& flow_path, const fs::path& class_path, const fs::path& inst_path,
                const std::string& stem, const ClassPriorTable& table, const DetectorConfig& config,
                const DetectOptions& opt) {
  const PanopticMap seg = load_panoptic(class_path, inst_path);
  const DetectionResult result = detect_frame(load_flo(flow_path), seg, table, config);
  std::optional<RgbImage> frame;
  if (!opt.frame.empty()) frame = load_rgb(opt.frame);
  write_detection(opt.out, stem, result, seg, opt.diagnostics, frame);
}

int run_detect(const DetectOptions& opt) {
  const DetectorConfig config = effective_config(opt);
  if (opt.print_config) {
    write_config(std::cout, config);
    return kExitOk;
  }
  if (opt.table.empty() || opt.out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "detect needs --table and --out");
  }
  const ClassPriorTable table = load_class_table(fs::path(opt.table));

  if (opt.batch.empty()) {
    if (opt.flow.empty() || opt.class_map.empty() || opt.instance_map.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "detect needs --flow, --class and --inst (or --batch)");
    }
    const std::string stem = opt.name.empty() ? fs::path(opt.flow).stem().string() : opt.name;
    detect_one(opt.flow, opt.class_map, opt.instance_map, stem, table, config, opt);
    return kExitOk;
  }

  if (!fs::is_directory(opt.batch)) throw Error(ErrorCode::kFileNotFound, opt.batch);
  std::vector<fs::path> flows;
  for (const auto& entry : fs::directory_iterator(opt.batch)) {
    if (entry.is_regular_file() && entry.path().extension() == ".flo") flows.push_back(entry.path());
  }
  std::sort(flows.begin(), flows.end());
  if (flows.empty()) throw Error(ErrorCode::kFileNotFound, "no .flo files in " + opt.batch);

  int status = kExitOk;
  for (const auto& flow_path : flows) {
    const std::string stem = flow_path.stem().string();
    const fs::path dir = flow_path.parent_path();
    try {
      detect_one(flow_path, dir / (stem + ".class.pgm"), dir / (stem + ".inst.pgm"), stem, table,
                 config, opt);
    } catch (const Error& e) {
      std::cerr << "foels: " << stem << ": " << e.what() << '\n';
      status = std::max(status, e.code() == ErrorCode::kInvariantViolation ? kExitInternal : kExitInput);
    }
  }
  return status;
}

int run_eval(const EvalOptions& opt) {
  std::vector<std::string> scenes, exclude;
  if (!opt.scenes.empty()) scenes = load_scene_list(opt.scenes);
  if (!opt.exclude.empty()) exclude = load_scene_list(opt.exclude);
  const EvaluationReport report = evaluate_directories(opt.pred, opt.gt, scenes, exclude);
  for (const auto& frame : report.missing) {
    std::cerr << "foels: no prediction for " << frame << " (not scored)\n";
  }
  if (opt.csv.empty()) {
    write_csv(std::cout, report);
  } else {
    std::ofstream out(opt.csv);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + opt.csv);
    write_csv(out, report);
  }
  return kExitOk;
}

std::string describe_foe(const SceneFile& scene) {
  try {
    const SignedFoe foe = ground_truth_foe(scene.intrinsics, scene.motion);
    std::ostringstream out;
    if (foe.is_infinite()) {
      out << "infinite " << foe.hx << ' ' << foe.hy << " sign +1";
    } else {
      out << "finite " << foe.point().x << ' ' << foe.point().y << " sign "
          << (foe.sign > 0 ? "+1" : "-1");
    }
    return out.str();
  } catch (const Error& e) {
    return "none " + std::string(to_string(e.code()));
  }
}

int run_synth(const SynthOptions& opt) {
  const SceneFile scene = load_scene(opt.spec);
  const RenderedFrame frame = render_flow(scene.scene, scene.intrinsics, scene.motion);
  const fs::path out(opt.out);
  fs::create_directories(out);
  const std::string& n = scene.name;
  save_flo(out / (n + ".flo"), frame.flow);
  save_panoptic(out / (n + ".class.pgm"), out / (n + ".inst.pgm"), frame.seg);
  save_pgm8(out / (n + ".gt.pgm"), mask_to_gray(frame.moving));

  const auto& intr = scene.intrinsics;
  const auto& m = scene.motion;
  std::ofstream manifest(out / (n + ".manifest.txt"));
  if (!manifest) throw Error(ErrorCode::kIoError, "cannot write manifest");
  manifest.precision(10);
  manifest << "name " << n << '\n'
           << "size " << intr.width << ' ' << intr.height << '\n'
           << "intrinsics " << intr.fx << ' ' << intr.fy << ' ' << intr.cx << ' ' << intr.cy << '\n'
           << "zoom " << intr.zoom_rate << '\n'
           << "translation " << m.t.x << ' ' << m.t.y << ' ' << m.t.z << '\n'
           << "rotation " << m.omega.x << ' ' << m.omega.y << ' ' << m.omega.z << '\n'
           << "foe " << describe_foe(scene) << '\n'
           << "moving_pixels " << count_true(frame.moving) << '\n'
           << "files " << n << ".flo " << n << ".class.pgm " << n << ".inst.pgm " << n << ".gt.pgm\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-object detection from optical flow and panoptic segmentation"};
  app.require_subcommand(0, 1);

  bool top_print_config = false;
  app.add_flag("--print-config", top_print_config, "Print the default configuration and exit");

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "Detect moving objects in one frame or a directory");
  detect->add_option("--flow", det.flow, "Middlebury .flo file");
  detect->add_option("--class", det.class_map, "16-bit PGM class-id map");
  detect->add_option("--inst", det.instance_map, "16-bit PGM instance-id map");
  detect->add_option("--batch", det.batch, "Directory of <frame>.flo/.class.pgm/.inst.pgm triples");
  detect->add_option("--table", det.table, "Class prior table");
  detect->add_option("--out", det.out, "Output directory");
  detect->add_option("--name", det.name, "Output file stem (single-frame mode)");
  detect->add_option("--frame", det.frame, "Input image (PPM/PNG) used as overlay background");
  detect->add_option("--config", det.config, "Configuration file (key value lines)");
  detect->add_option("--seed", det.seed, "RANSAC seed (overrides the configuration)");
  detect->add_flag("--diagnostics", det.diagnostics, "Write all inspection panels");
  detect->add_flag("--print-config", det.print_config, "Print the effective configuration and exit");

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Score predicted masks against ground truth (IoU)");
  eval->add_option("--pred", ev.pred, "Prediction root (<scene>/<frame>.mask.pgm)")->required();
  eval->add_option("--gt", ev.gt, "Ground-truth root (<scene>/<frame>.png|pgm)")->required();
  eval->add_option("--scenes", ev.scenes, "File listing the scenes to score");
  eval->add_option("--exclude", ev.exclude, "File listing scenes to skip");
  eval->add_option("--csv", ev.csv, "Write CSV here instead of stdout");

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Render a synthetic scene with ground truth");
  synth->add_option("--spec", sy.spec, "Scene description file")->required();
  synth->add_option("--out", sy.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*detect) return run_detect(det);
    if (*eval) return run_eval(ev);
    if (*synth) return run_synth(sy);
    if (top_print_config) {
      write_config(std::cout, DetectorConfig{});
      return kExitOk;
    }
    std::cout << app.help();
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "foels: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvariantViolation ? kExitInternal : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "foels: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
