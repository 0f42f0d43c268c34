#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "foels/evaluation.hpp"
#include "foels/flow_io.hpp"
#include "foels/foe_estimation.hpp"
#include "foels/image_io.hpp"

namespace fs = std::filesystem;
using namespace foels;

namespace {

const fs::path kCli = FOELS_CLI_PATH;
const fs::path kData = FOELS_DATA_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli.string() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("cli: synth, detect and eval") {
  TempDir tmp("foels_cli_test");
  write(tmp.path / "scene.txt",
        "name fwd\nsize 80 60\ntranslation 0 0 0.4\nbackground plane 12 100\n"
        "object 8 25 18 12 8 2 1 -0.4 0 0\n");
  REQUIRE(run("synth --spec " + (tmp.path / "scene.txt").string() + " --out " + (tmp.path / "in").string()) == 0);
  for (const char* f : {"fwd.flo", "fwd.class.pgm", "fwd.inst.pgm", "fwd.gt.pgm", "fwd.manifest.txt"}) {
    CHECK(fs::exists(tmp.path / "in" / f));
  }
  CHECK(slurp(tmp.path / "in/fwd.manifest.txt").find("foe finite 40 30 sign +1") != std::string::npos);

  const std::string table = (kData / "coco_panoptic_priors.txt").string();
  REQUIRE(run("detect --batch " + (tmp.path / "in").string() + " --table " + table + " --out " +
              (tmp.path / "out/s").string() + " --diagnostics") == 0);
  for (const char* f : {"fwd.mask.pgm", "fwd.report.txt", "fwd.prior.png", "fwd.flow.png", "fwd.foe.png",
                        "fwd.likelihood.png", "fwd.posterior.png", "fwd.pixels.pgm", "fwd.objects.pgm",
                        "fwd.overlay.png", "fwd.segmentation.png"}) {
    CHECK(fs::exists(tmp.path / "out/s" / f));
  }
  CHECK(frame_iou(load_mask(tmp.path / "out/s/fwd.mask.pgm"), load_mask(tmp.path / "in/fwd.gt.pgm")) >= 0.9);

  fs::create_directories(tmp.path / "gt/s");
  fs::copy_file(tmp.path / "in/fwd.gt.pgm", tmp.path / "gt/s/fwd.gt.pgm");
  REQUIRE(run("eval --pred " + (tmp.path / "out").string() + " --gt " + (tmp.path / "gt").string() + " --csv " +
              (tmp.path / "score.csv").string()) == 0);
  CHECK(slurp(tmp.path / "score.csv").rfind("scene,frame,iou\ns,fwd,", 0) == 0);
}

TEST_CASE("cli: input errors exit with status 1") {
  TempDir tmp("foels_cli_err");
  CHECK(run("synth --spec " + (tmp.path / "missing.txt").string() + " --out " + tmp.path.string()) == 1);
  write(tmp.path / "empty.txt", "");
  CHECK(run("synth --spec " + (tmp.path / "empty.txt").string() + " --out " + tmp.path.string()) == 1);
  write(tmp.path / "s.txt", "name a\nsize 20 20\ntranslation 0 0 0.2\nbackground plane 10 100\n");
  REQUIRE(run("synth --spec " + (tmp.path / "s.txt").string() + " --out " + tmp.path.string()) == 0);
  const std::string frame = " --flow " + (tmp.path / "a.flo").string() + " --class " +
                            (tmp.path / "a.class.pgm").string() + " --inst " + (tmp.path / "a.inst.pgm").string();
  CHECK(run("detect" + frame + " --table " + (tmp.path / "no_table.txt").string() + " --out " + tmp.path.string()) == 1);
  CHECK(run("detect" + frame + " --out " + tmp.path.string()) == 1);
  write(tmp.path / "t.txt", "100 0.9 - road\n");  // class 100 present, others fine
  CHECK(run("detect" + frame + " --table " + (tmp.path / "t.txt").string() + " --out " + tmp.path.string()) == 0);
  write(tmp.path / "t2.txt", "3 0.9 - car\n");
  CHECK(run("detect" + frame + " --table " + (tmp.path / "t2.txt").string() + " --out " + tmp.path.string()) == 1);
  CHECK(run("eval --gt " + tmp.path.string()) == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("--print-config") == 0);
}

TEST_CASE("cli: synthesized fields point along the manifest FoE") {
  TempDir tmp("foels_cli_synth");
  write(tmp.path / "fwd.txt", "name fwd\nsize 64 48\ntranslation 0.1 0.05 0.5\nbackground plane 10 100\n");
  write(tmp.path / "zoom.txt", "name zoom\nsize 64 48\nzoom 1.03\nbackground plane 10 100\n");
  for (const char* spec : {"fwd.txt", "zoom.txt"}) {
    REQUIRE(run("synth --spec " + (tmp.path / spec).string() + " --out " + tmp.path.string()) == 0);
  }
  CHECK(slurp(tmp.path / "zoom.manifest.txt").find("foe finite 32 24 sign +1") != std::string::npos);
  CHECK(slurp(tmp.path / "fwd.manifest.txt").find("foe finite 44.8 30.4 sign +1") != std::string::npos);

  const std::pair<const char*, Vec2> cases[] = {{"fwd.flo", {44.8, 30.4}}, {"zoom.flo", {32, 24}}};
  for (const auto& [file, e] : cases) {
    const FlowField f = load_flo(tmp.path / file);
    const SignedFoe foe = SignedFoe::finite(e, +1);
    double worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Vec2 p = f.u().position(i);
      if (norm(f.at(i)) < 1e-6 || norm(p - e) < 1e-6) continue;
      worst = std::max(worst, angular_deviation(foe, p, f.at(i)));
    }
    CHECK(worst < 1e-6);
  }
}
