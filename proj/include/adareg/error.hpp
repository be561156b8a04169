#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adareg {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  invalid_interval,
  invalid_residual,
  invalid_weight,
  unsupported_mode,
  divergence,
  degenerate_region,
  image_too_small,
  io,
  parse,
  bad_magic,
  unsupported_format,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by file readers; offset is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& what)
      : Error(code, what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace adareg
