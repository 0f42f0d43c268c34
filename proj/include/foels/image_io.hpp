#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "foels/image.hpp"

namespace foels {

using LabelImage = Grid<std::uint16_t>;
using GrayImage = Grid<std::uint8_t>;

// Netpbm. 16-bit PGM samples are big-endian (maxval 65535); 8-bit PGM and
// P6 PPM use one byte per sample.
std::vector<std::uint8_t> encode_pgm16(const LabelImage& image);
std::vector<std::uint8_t> encode_pgm8(const GrayImage& image);
std::vector<std::uint8_t> encode_ppm(const RgbImage& image);

/// Decodes a binary P5 PGM of any maxval into 16-bit samples.
LabelImage decode_pgm(std::span<const std::uint8_t> bytes);
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const RgbImage& image);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

LabelImage load_pgm(const std::filesystem::path& path);
void save_pgm16(const std::filesystem::path& path, const LabelImage& image);
void save_pgm8(const std::filesystem::path& path, const GrayImage& image);
void save_ppm(const std::filesystem::path& path, const RgbImage& image);
void save_png(const std::filesystem::path& path, const RgbImage& image);

/// PPM or PNG, chosen by extension.
RgbImage load_rgb(const std::filesystem::path& path);

/// Reads a PGM or PNG mask; any nonzero sample is true.
BinaryMask load_mask(const std::filesystem::path& path);

/// 0/255 rendering of a mask.
GrayImage mask_to_gray(const BinaryMask& mask);

/// round(255 p) rendering of a probability map.
GrayImage probability_to_gray(const ProbabilityMap& map);

}  // namespace foels
