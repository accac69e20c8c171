#pragma once

#include <stdexcept>
#include <string>

namespace depreg {

enum class Errc {
  invalid_argument,
  domain,
  rank_deficient,
  degenerate_fit,
  nonpositive_lrv,
  parse,
  io,
};

const char* to_string(Errc code) noexcept;

// Numerical failures map to a distinct CLI exit status from usage errors.
inline bool is_numerical(Errc code) noexcept {
  return code == Errc::rank_deficient || code == Errc::degenerate_fit ||
         code == Errc::nonpositive_lrv;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace depreg
