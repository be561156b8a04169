#include "adareg/error.hpp"

namespace adareg {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::invalid_interval: return "invalid interval";
    case Errc::invalid_residual: return "invalid residual";
    case Errc::invalid_weight: return "invalid weight";
    case Errc::unsupported_mode: return "unsupported mode";
    case Errc::divergence: return "solver diverged";
    case Errc::degenerate_region: return "degenerate region";
    case Errc::image_too_small: return "image too small";
    case Errc::io: return "i/o error";
    case Errc::parse: return "parse error";
    case Errc::bad_magic: return "bad magic";
    case Errc::unsupported_format: return "unsupported format";
  }
  return "unknown error";
}

}  // namespace adareg
