#include <doctest.h>

#include <sstream>

#include "foels/segmentation_prior.hpp"
#include "properties.hpp"

using namespace foels;

namespace {

ClassPriorTable table_from(const std::string& text) {
  std::istringstream in(text);
  return load_class_table(in);
}

ErrorCode table_error(const std::string& text) {
  try {
    table_from(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvariantViolation;
}

}  // namespace

TEST_CASE("load_class_table: entries") {
  const ClassPriorTable t = table_from("# comment\n7 0.05 sky sky\n\n13 0.9 - car\n20 0.5 - traffic light  # trailing\n");
  REQUIRE(t.size() == 3);
  CHECK(t.at(7).prior == 0.05);
  CHECK(t.at(7).is_sky);
  CHECK(t.at(7).name == "sky");
  CHECK(t.at(13).prior == 0.9);
  CHECK_FALSE(t.at(13).is_sky);
  CHECK(t.at(13).name == "car");
  CHECK(t.at(20).name == "traffic light");
}

TEST_CASE("load_class_table: errors") {
  CHECK(table_error("7 0.05 sky sky\n7 0.5 - other\n") == ErrorCode::kDuplicateClass);
  CHECK(table_error("7 1.5 - x\n") == ErrorCode::kPriorOutOfRange);
  CHECK(table_error("7 -0.1 - x\n") == ErrorCode::kPriorOutOfRange);
  CHECK(table_error("seven 0.5 - x\n") == ErrorCode::kParseError);
  CHECK(table_error("7 0.5 maybe x\n") == ErrorCode::kParseError);
  CHECK(table_error("7 0.5\n") == ErrorCode::kParseError);
  CHECK_THROWS_AS(load_class_table(std::filesystem::path("/nonexistent/table.txt")), Error);
}

TEST_CASE("prior_map") {
  const ClassPriorTable t = table_from("7 0.05 sky sky\n13 0.9 - car\n");
  SUBCASE("uniform") {
    const ProbabilityMap p = prior_map(PanopticMap(3, 2, 7, 0), t);
    for (double v : p.values()) CHECK(v == 0.05);
  }
  SUBCASE("two regions") {
    PanopticMap seg(2, 1, 7, 0);
    seg.class_id(1, 0) = 13;
    const ProbabilityMap p = prior_map(seg, t);
    CHECK(p(0, 0) == 0.05);
    CHECK(p(1, 0) == 0.9);
  }
  SUBCASE("unknown class") {
    PanopticMap seg(2, 1, 7, 0);
    seg.class_id(1, 0) = 99;
    try {
      prior_map(seg, t);
      FAIL("expected UnknownClass");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnknownClass);
      CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
  }
}

TEST_CASE("static_mask") {
  ProbabilityMap p(3, 1);
  p[0] = 0.05;
  p[1] = 0.9;
  p[2] = 0.3;
  const BinaryMask m = static_mask(p, 0.3);
  CHECK(m[0] == 1);
  CHECK(m[1] == 0);
  CHECK(m[2] == 0);
  CHECK_THROWS_AS(static_mask(p, 0.0), Error);
  CHECK_THROWS_AS(static_mask(p, 1.0), Error);
}

TEST_CASE("sky_mask") {
  const ClassPriorTable t = table_from("7 0.05 sky sky\n13 0.9 - car\n");
  PanopticMap seg(3, 1, 13, 0);
  CHECK(count_true(sky_mask(seg, t)) == 0);
  seg.class_id(0, 0) = 7;
  seg.class_id(2, 0) = 7;
  const BinaryMask m = sky_mask(seg, t);
  CHECK(m[0] == 1);
  CHECK(m[1] == 0);
  CHECK(m[2] == 1);
}

TEST_CASE("panoptic maps round-trip through PGM files") {
  PanopticMap seg(4, 3, 0, 0);
  seg.class_id(1, 1) = 132;
  seg.instance_id(1, 1) = 700;
  const auto dir = std::filesystem::temp_directory_path() / "foels_seg_test";
  std::filesystem::create_directories(dir);
  save_panoptic(dir / "a.class.pgm", dir / "a.inst.pgm", seg);
  const PanopticMap back = load_panoptic(dir / "a.class.pgm", dir / "a.inst.pgm");
  CHECK(back.class_id == seg.class_id);
  CHECK(back.instance_id == seg.instance_id);
  std::filesystem::remove_all(dir);
}

TEST_CASE("segmentation_prior properties") {
  for (const auto& r : testing::run_properties("segmentation_prior", 300, 12)) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.passed());
  }
}
