#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adareg/grid.hpp"

namespace adareg {

/// 8-bit interleaved RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // 3 * width * height
};

/// Reads binary PGM (P5, 8 or 16 bit) or PNG, chosen by file signature.
/// Color PNGs are converted with luma weights 0.299 / 0.587 / 0.114.
/// Values are normalized to [0, 1].
ScalarField read_image(const std::string& path);

/// Writes 8-bit gray; the format follows the extension (.pgm or .png).
/// Values are clamped to [0, 1] and rounded to the nearest level.
void write_image(const std::string& path, const ScalarField& field);

void write_mask(const std::string& path, const BinaryMask& mask);
/// Any nonzero pixel is set.
BinaryMask read_mask(const std::string& path);

/// .ppm (P6) or .png by extension.
void write_rgb_image(const std::string& path, const RgbImage& image);

/// Middlebury .flo: "PIEH", int32 width, int32 height, then row-major
/// interleaved float32 (u, v), all little-endian.
VectorField2 read_flo(const std::string& path);
void write_flo(const std::string& path, const VectorField2& flow);

std::vector<std::uint8_t> encode_flo(const VectorField2& flow);
VectorField2 decode_flo(const std::vector<std::uint8_t>& bytes);

/// Middlebury color-wheel coding. Magnitudes are normalized by max_magnitude,
/// or by the 95th percentile of the field's magnitudes when absent. Zero flow
/// is white; unknown flow (see kUnknownFlow) is black.
RgbImage flow_to_color(const VectorField2& flow, std::optional<double> max_magnitude = std::nullopt);

/// The 55-entry wheel (RY 15, YG 6, GC 4, CB 11, BM 13, MR 6).
const std::vector<std::array<std::uint8_t, 3>>& color_wheel();

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace adareg
