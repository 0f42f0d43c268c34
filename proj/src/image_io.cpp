#include "foels/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace foels {
namespace {

std::vector<std::uint8_t> header(const char* magic, int width, int height, int maxval) {
  const std::string text = std::string(magic) + "\n" + std::to_string(width) + " " +
                           std::to_string(height) + "\n" + std::to_string(maxval) + "\n";
  return {text.begin(), text.end()};
}

struct NetpbmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

NetpbmHeader parse_header(std::span<const std::uint8_t> bytes) {
  NetpbmHeader h;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_token = [&] {
    skip_space();
    std::string token;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) token += static_cast<char>(bytes[pos++]);
    return token;
  };
  auto read_int = [&] {
    const std::string token = read_token();
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::kParseError, "bad netpbm header field '" + token + "'");
    }
    return std::stoi(token);
  };
  h.magic = read_token();
  h.width = read_int();
  h.height = read_int();
  h.maxval = read_int();
  if (pos >= bytes.size()) throw Error(ErrorCode::kTruncated, "netpbm header without data");
  h.data_offset = pos + 1;  // exactly one whitespace byte after maxval
  if (h.width <= 0 || h.height <= 0) throw Error(ErrorCode::kBadDims, "netpbm dimensions");
  if (h.maxval <= 0 || h.maxval > 65535) throw Error(ErrorCode::kParseError, "netpbm maxval");
  return h;
}

bool has_extension(const std::filesystem::path& path, const char* ext) {
  std::string e = path.extension().string();
  for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e == ext;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kParseError, std::string("png: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::kParseError, std::string("png: ") + image.message);
  }
  RgbImage out(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_pgm16(const LabelImage& image) {
  auto out = header("P5", image.width(), image.height(), 65535);
  for (auto v : image.values()) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

std::vector<std::uint8_t> encode_pgm8(const GrayImage& image) {
  auto out = header("P5", image.width(), image.height(), 255);
  out.insert(out.end(), image.values().begin(), image.values().end());
  return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& image) {
  auto out = header("P6", image.width(), image.height(), 255);
  for (auto c : image.values()) {
    out.push_back(c.r);
    out.push_back(c.g);
    out.push_back(c.b);
  }
  return out;
}

LabelImage decode_pgm(std::span<const std::uint8_t> bytes) {
  const NetpbmHeader h = parse_header(bytes);
  if (h.magic != "P5") throw Error(ErrorCode::kBadMagic, "expected binary PGM (P5)");
  const std::size_t sample_bytes = h.maxval > 255 ? 2 : 1;
  const std::size_t pixels = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() < h.data_offset + pixels * sample_bytes) {
    throw Error(ErrorCode::kTruncated, "PGM payload shorter than its header implies");
  }
  LabelImage image(h.width, h.height);
  const std::uint8_t* p = bytes.data() + h.data_offset;
  for (std::size_t i = 0; i < pixels; ++i) {
    image[i] = sample_bytes == 2 ? static_cast<std::uint16_t>(p[2 * i] << 8 | p[2 * i + 1]) : p[i];
  }
  return image;
}

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
  const NetpbmHeader h = parse_header(bytes);
  if (h.magic != "P6") throw Error(ErrorCode::kBadMagic, "expected binary PPM (P6)");
  if (h.maxval > 255) throw Error(ErrorCode::kParseError, "16-bit PPM is not supported");
  const std::size_t pixels = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() < h.data_offset + 3 * pixels) {
    throw Error(ErrorCode::kTruncated, "PPM payload shorter than its header implies");
  }
  RgbImage image(h.width, h.height);
  const std::uint8_t* p = bytes.data() + h.data_offset;
  for (std::size_t i = 0; i < pixels; ++i) image[i] = {p[3 * i], p[3 * i + 1], p[3 * i + 2]};
  return image;
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> raw;
  raw.reserve(3 * image.size());
  for (auto c : image.values()) {
    raw.push_back(c.r);
    raw.push_back(c.g);
    raw.push_back(c.b);
  }
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, raw.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, std::string("png: ") + png.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, raw.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, std::string("png: ") + png.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

LabelImage load_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

void save_pgm16(const std::filesystem::path& path, const LabelImage& image) {
  write_file(path, encode_pgm16(image));
}

void save_pgm8(const std::filesystem::path& path, const GrayImage& image) {
  write_file(path, encode_pgm8(image));
}

void save_ppm(const std::filesystem::path& path, const RgbImage& image) {
  write_file(path, encode_ppm(image));
}

void save_png(const std::filesystem::path& path, const RgbImage& image) {
  write_file(path, encode_png(image));
}

RgbImage load_rgb(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return has_extension(path, ".png") ? decode_png(bytes) : decode_ppm(bytes);
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (has_extension(path, ".png")) {
    const RgbImage rgb = decode_png(bytes);
    BinaryMask mask(rgb.width(), rgb.height());
    for (std::size_t i = 0; i < rgb.size(); ++i) {
      mask[i] = rgb[i].r != 0 || rgb[i].g != 0 || rgb[i].b != 0;
    }
    return mask;
  }
  const LabelImage gray = decode_pgm(bytes);
  BinaryMask mask(gray.width(), gray.height());
  for (std::size_t i = 0; i < gray.size(); ++i) mask[i] = gray[i] != 0;
  return mask;
}

GrayImage mask_to_gray(const BinaryMask& mask) {
  GrayImage out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 255 : 0;
  return out;
}

GrayImage probability_to_gray(const ProbabilityMap& map) {
  GrayImage out(map.width(), map.height());
  for (std::size_t i = 0; i < map.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(255.0 * clip01(map[i])));
  }
  return out;
}

}  // namespace foels
