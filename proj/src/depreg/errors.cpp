#include "depreg/errors.hpp"

namespace depreg {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::domain: return "domain error";
    case Errc::rank_deficient: return "rank-deficient design";
    case Errc::degenerate_fit: return "degenerate fit";
    case Errc::nonpositive_lrv: return "nonpositive long-run variance";
    case Errc::parse: return "parse error";
    case Errc::io: return "I/O error";
  }
  return "unknown error";
}

}  // namespace depreg
