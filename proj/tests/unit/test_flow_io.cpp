#include <doctest.h>

#include <bit>
#include <cstring>

#include "foels/flow_io.hpp"
#include "properties.hpp"

using namespace foels;

namespace {

void put_f32(std::vector<std::uint8_t>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(static_cast<std::uint32_t>(v) >> (8 * i)));
}

std::vector<std::uint8_t> stream(float magic, int w, int h, std::initializer_list<float> payload) {
  std::vector<std::uint8_t> out;
  put_f32(out, magic);
  put_i32(out, w);
  put_i32(out, h);
  for (float v : payload) put_f32(out, v);
  return out;
}

ErrorCode code_of(std::span<const std::uint8_t> bytes) {
  try {
    read_flo(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvariantViolation;
}

}  // namespace

TEST_CASE("read_flo: 1x1 field") {
  const FlowField f = read_flo(stream(kFloMagic, 1, 1, {1.0f, 0.0f}));
  CHECK(f.width() == 1);
  CHECK(f.height() == 1);
  CHECK(f.at(0) == Vec2{1.0, 0.0});
  CHECK(f.valid(0));
}

TEST_CASE("read_flo: unknown flow marks the pixel invalid") {
  const FlowField f = read_flo(stream(kFloMagic, 2, 1, {1e10f, 0.0f, 1.0f, 2.0f}));
  CHECK_FALSE(f.valid(0));
  CHECK(f.valid(1));
  CHECK(f.at(1) == Vec2{1.0, 2.0});
  // threshold is exclusive
  CHECK(read_flo(stream(kFloMagic, 1, 1, {1e9f, -1e9f})).valid(0));
  CHECK_FALSE(read_flo(stream(kFloMagic, 1, 1, {0.0f, -2e9f})).valid(0));
}

TEST_CASE("read_flo: malformed streams") {
  CHECK(code_of(stream(0.0f, 1, 1, {1.0f, 0.0f})) == ErrorCode::kBadMagic);
  CHECK(code_of(std::vector<std::uint8_t>{0x50, 0x49}) == ErrorCode::kTruncated);
  auto header_only = stream(kFloMagic, 1, 1, {});
  header_only.resize(8);
  CHECK(code_of(header_only) == ErrorCode::kTruncated);
  CHECK(code_of(stream(kFloMagic, 2, 2, {1, 2, 3})) == ErrorCode::kTruncated);
  CHECK(code_of(stream(kFloMagic, 0, 1, {})) == ErrorCode::kBadDims);
  CHECK(code_of(stream(kFloMagic, 1, -3, {})) == ErrorCode::kBadDims);
  CHECK(code_of(stream(kFloMagic, kMaxFloDimension + 1, 1, {})) == ErrorCode::kBadDims);
}

TEST_CASE("write_flo: byte layout of a 2x1 field") {
  FlowField f(2, 1);
  f.set(0, 1.0f, 3.0f);
  f.set(1, 2.0f, 4.0f);
  const std::vector<std::uint8_t> expected = {
      0x50, 0x49, 0x45, 0x48, 0x02, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00,
      0x80, 0x3f, 0x00, 0x00, 0x40, 0x40, 0x00, 0x00, 0x00, 0x40, 0x00, 0x00, 0x80, 0x40};
  CHECK(write_flo(f) == expected);
}

TEST_CASE("write_flo: invalid pixels are written as the unknown value") {
  FlowField f(2, 1);
  f.set(0, 5.0f, 6.0f);
  f.invalidate(1);
  const auto bytes = write_flo(f);
  REQUIRE(bytes.size() == 28);
  const std::vector<std::uint8_t> unknown = {0xf9, 0x02, 0x15, 0x50};
  CHECK(std::vector<std::uint8_t>(bytes.begin() + 20, bytes.begin() + 24) == unknown);
  CHECK(std::vector<std::uint8_t>(bytes.begin() + 24, bytes.begin() + 28) == unknown);
  CHECK(read_flo(bytes) == f);
}

TEST_CASE("FlowField rejects non-finite values") {
  FlowField f(1, 1);
  CHECK_THROWS_AS(f.set(0, std::numeric_limits<float>::infinity(), 0.0f), Error);
  CHECK_THROWS_AS(f.set(0, 0.0f, std::numeric_limits<float>::quiet_NaN()), Error);
}

TEST_CASE("flow_to_color") {
  SUBCASE("zero flow is white") {
    const RgbImage img = flow_to_color(FlowField(3, 2));
    for (Rgb c : img.values()) CHECK(c == Rgb{255, 255, 255});
  }
  SUBCASE("opposite flows are 180 degrees apart in hue") {
    FlowField f(2, 1);
    f.set(0, 1.0f, 0.0f);
    f.set(1, -1.0f, 0.0f);
    const RgbImage img = flow_to_color(f);
    const double diff = std::fabs(rgb_hue_degrees(img[0]) - rgb_hue_degrees(img[1]));
    CHECK(diff == doctest::Approx(180.0).epsilon(0.01));
  }
  SUBCASE("invalid pixel is black") {
    FlowField f(2, 1);
    f.set(0, 1.0f, 1.0f);
    f.invalidate(1);
    CHECK(flow_to_color(f)[1] == Rgb{0, 0, 0});
  }
}

TEST_CASE("flow_io properties") {
  for (const auto& r : testing::run_properties("flow_io", 300, 11)) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.passed());
  }
}
