#include "adareg/imgio.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include "adareg/error.hpp"
#include "adareg/flow.hpp"

namespace adareg {

namespace {

constexpr int kMaxSide = 1 << 15;

bool ends_with(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                    [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

std::uint8_t quantize(double v) {
  if (!(v >= 0.0)) return 0;  // NaN lands here too
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

// --- PGM -------------------------------------------------------------------

class PgmReader {
 public:
  explicit PgmReader(const std::vector<std::uint8_t>& bytes) : b_(bytes) {}

  ScalarField read() {
    if (b_.size() < 2 || b_[0] != 'P' || b_[1] != '5') {
      throw ParseError(Errc::bad_magic, 0, "not a binary PGM (expected P5)");
    }
    pos_ = 2;
    const long width = header_int("width");
    const long height = header_int("height");
    const long maxval = header_int("maxval");
    if (pos_ >= b_.size() || !std::isspace(b_[pos_])) {
      throw ParseError(Errc::parse, pos_, "truncated PGM header");
    }
    ++pos_;
    if (width <= 0 || height <= 0 || width > kMaxSide || height > kMaxSide) {
      throw ParseError(Errc::parse, pos_, "PGM dimensions out of range");
    }
    if (maxval <= 0 || maxval > 65535) throw ParseError(Errc::parse, pos_, "PGM maxval out of range");
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (b_.size() - pos_ < n * bpp) {
      throw ParseError(Errc::parse, b_.size(), "truncated PGM pixel data: need " + std::to_string(n * bpp) +
                                                   " bytes, have " + std::to_string(b_.size() - pos_));
    }
    ScalarField f(static_cast<int>(width), static_cast<int>(height));
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < n; ++i) {
      unsigned v = b_[pos_ + i * bpp];
      if (bpp == 2) v = (v << 8) | b_[pos_ + i * bpp + 1];
      f[i] = std::min(1.0, v * scale);
    }
    return f;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  long header_int(const char* what) {
    skip_space_and_comments();
    if (pos_ >= b_.size()) {
      throw ParseError(Errc::parse, pos_, std::string("truncated PGM header while reading ") + what);
    }
    if (!std::isdigit(b_[pos_])) {
      throw ParseError(Errc::parse, pos_, std::string("expected a number for ") + what);
    }
    long v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_] - '0');
      if (v > 1'000'000) throw ParseError(Errc::parse, pos_, std::string("PGM ") + what + " overflows");
      ++pos_;
    }
    return v;
  }

  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> encode_pgm(int width, int height, const std::vector<std::uint8_t>& gray) {
  const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), gray.begin(), gray.end());
  return out;
}

// --- PNG -------------------------------------------------------------------

bool is_png(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  return bytes.size() >= 8 && std::equal(std::begin(sig), std::end(sig), bytes.begin());
}

ScalarField decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw ParseError(Errc::parse, 0, std::string("PNG: ") + img.message);
  }
  if (img.width == 0 || img.height == 0 || img.width > kMaxSide || img.height > kMaxSide) {
    png_image_free(&img);
    throw ParseError(Errc::parse, 16, "PNG dimensions out of range");
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ParseError(Errc::parse, 0, "PNG: " + msg);
  }
  ScalarField f(static_cast<int>(img.width), static_cast<int>(img.height));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (color) {
      const double luma = 0.299 * buf[3 * i] + 0.587 * buf[3 * i + 1] + 0.114 * buf[3 * i + 2];
      f[i] = std::min(1.0, luma / 255.0);
    } else {
      f[i] = buf[i] / 255.0;
    }
  }
  return f;
}

std::vector<std::uint8_t> encode_png(int width, int height, bool color, const std::vector<std::uint8_t>& pixels) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(Errc::io, std::string("PNG encode: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(Errc::io, std::string("PNG encode: ") + img.message);
  }
  out.resize(size);
  return out;
}

// --- .flo ------------------------------------------------------------------

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[at + static_cast<std::size_t>(k)]) << (8 * k);
  return v;
}

}  // namespace

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::io, "read failed for " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

ScalarField read_image(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  if (is_png(bytes)) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P') return PgmReader(bytes).read();
  throw ParseError(Errc::unsupported_format, 0, path + ": neither PGM (P5) nor PNG");
}

void write_image(const std::string& path, const ScalarField& field) {
  std::vector<std::uint8_t> gray(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) gray[i] = quantize(field[i]);
  if (ends_with(path, ".pgm")) {
    write_file_bytes(path, encode_pgm(field.width(), field.height(), gray));
  } else if (ends_with(path, ".png")) {
    write_file_bytes(path, encode_png(field.width(), field.height(), false, gray));
  } else {
    throw Error(Errc::unsupported_format, path + ": image output must end in .pgm or .png");
  }
}

void write_mask(const std::string& path, const BinaryMask& mask) {
  ScalarField f(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.bits.size(); ++i) f[i] = mask.bits[i] ? 1.0 : 0.0;
  write_image(path, f);
}

BinaryMask read_mask(const std::string& path) {
  const ScalarField f = read_image(path);
  BinaryMask m(f.width(), f.height());
  for (std::size_t i = 0; i < f.size(); ++i) m.bits[i] = f[i] > 0.0 ? 1 : 0;
  return m;
}

void write_rgb_image(const std::string& path, const RgbImage& image) {
  if (image.rgb.size() != static_cast<std::size_t>(3 * image.width * image.height)) {
    throw Error(Errc::dimension_mismatch, "rgb buffer does not match image size");
  }
  if (ends_with(path, ".ppm")) {
    const std::string header =
        "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.rgb.begin(), image.rgb.end());
    write_file_bytes(path, out);
  } else if (ends_with(path, ".png")) {
    write_file_bytes(path, encode_png(image.width, image.height, true, image.rgb));
  } else {
    throw Error(Errc::unsupported_format, path + ": color output must end in .ppm or .png");
  }
}

std::vector<std::uint8_t> encode_flo(const VectorField2& flow) {
  std::vector<std::uint8_t> out{'P', 'I', 'E', 'H'};
  out.reserve(12 + 8 * flow.size());
  put_u32(out, static_cast<std::uint32_t>(flow.width()));
  put_u32(out, static_cast<std::uint32_t>(flow.height()));
  for (std::size_t i = 0; i < flow.size(); ++i) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(flow.x[i])));
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(flow.y[i])));
  }
  return out;
}

VectorField2 decode_flo(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || !std::equal(bytes.begin(), bytes.begin() + 4, "PIEH")) {
    throw ParseError(Errc::bad_magic, 0, "missing PIEH tag");
  }
  if (bytes.size() < 12) throw ParseError(Errc::parse, bytes.size(), "truncated .flo header");
  const auto width = static_cast<std::int32_t>(get_u32(bytes, 4));
  const auto height = static_cast<std::int32_t>(get_u32(bytes, 8));
  if (width <= 0 || height <= 0 || width > kMaxSide || height > kMaxSide) {
    throw ParseError(Errc::parse, 4, ".flo dimensions out of range");
  }
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() != 12 + 8 * n) {
    throw ParseError(Errc::parse, std::min(bytes.size(), 12 + 8 * n),
                     ".flo size mismatch: expected " + std::to_string(12 + 8 * n) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  VectorField2 flow(width, height);
  for (std::size_t i = 0; i < n; ++i) {
    flow.x[i] = std::bit_cast<float>(get_u32(bytes, 12 + 8 * i));
    flow.y[i] = std::bit_cast<float>(get_u32(bytes, 16 + 8 * i));
  }
  return flow;
}

VectorField2 read_flo(const std::string& path) { return decode_flo(read_file_bytes(path)); }

void write_flo(const std::string& path, const VectorField2& flow) { write_file_bytes(path, encode_flo(flow)); }

const std::vector<std::array<std::uint8_t, 3>>& color_wheel() {
  static const auto wheel = [] {
    constexpr int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
    std::vector<std::array<std::uint8_t, 3>> w;
    auto ramp = [](int i, int n) { return static_cast<std::uint8_t>(255 * i / n); };
    for (int i = 0; i < RY; ++i) w.push_back({255, ramp(i, RY), 0});
    for (int i = 0; i < YG; ++i) w.push_back({static_cast<std::uint8_t>(255 - ramp(i, YG)), 255, 0});
    for (int i = 0; i < GC; ++i) w.push_back({0, 255, ramp(i, GC)});
    for (int i = 0; i < CB; ++i) w.push_back({0, static_cast<std::uint8_t>(255 - ramp(i, CB)), 255});
    for (int i = 0; i < BM; ++i) w.push_back({ramp(i, BM), 0, 255});
    for (int i = 0; i < MR; ++i) w.push_back({255, 0, static_cast<std::uint8_t>(255 - ramp(i, MR))});
    return w;
  }();
  return wheel;
}

RgbImage flow_to_color(const VectorField2& flow, std::optional<double> max_magnitude) {
  const auto& wheel = color_wheel();
  const int ncols = static_cast<int>(wheel.size());

  double norm = 0.0;
  if (max_magnitude) {
    norm = *max_magnitude;
  } else {
    std::vector<double> mags;
    mags.reserve(flow.size());
    for (std::size_t i = 0; i < flow.size(); ++i) {
      if (std::abs(flow.x[i]) <= kUnknownFlow && std::abs(flow.y[i]) <= kUnknownFlow) {
        mags.push_back(std::hypot(flow.x[i], flow.y[i]));
      }
    }
    if (!mags.empty()) {
      const std::size_t k = static_cast<std::size_t>(std::floor(0.95 * static_cast<double>(mags.size() - 1)));
      std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end());
      norm = mags[k];
    }
  }
  if (!(norm > 0.0)) norm = 1.0;

  RgbImage img{flow.width(), flow.height(), std::vector<std::uint8_t>(3 * flow.size(), 0)};
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (std::abs(flow.x[i]) > kUnknownFlow || std::abs(flow.y[i]) > kUnknownFlow) continue;
    const double fx = flow.x[i] / norm;
    const double fy = flow.y[i] / norm;
    const double rad = std::hypot(fx, fy);
    const double a = std::atan2(-fy, -fx) / std::numbers::pi;
    const double fk = (a + 1.0) / 2.0 * (ncols - 1);
    const int k0 = static_cast<int>(fk);
    const int k1 = (k0 + 1) % ncols;
    const double f = fk - k0;
    for (int b = 0; b < 3; ++b) {
      const double c0 = wheel[static_cast<std::size_t>(k0)][static_cast<std::size_t>(b)] / 255.0;
      const double c1 = wheel[static_cast<std::size_t>(k1)][static_cast<std::size_t>(b)] / 255.0;
      double col = (1.0 - f) * c0 + f * c1;
      if (rad <= 1.0) {
        col = 1.0 - rad * (1.0 - col);
      } else {
        col *= 0.75;
      }
      img.rgb[3 * i + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(255.0 * col);
    }
  }
  return img;
}

}  // namespace adareg
