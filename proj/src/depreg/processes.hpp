#pragma once

// Seeded simulators for stationary error processes:
//  - the AR(1) chain e_{k+1} = (e_k + eta_{k+1}) / 2 with eta = +-1/2, which
//    is stationary with uniform marginals on [-1/2, 1/2] but not strongly mixing;
//  - orbits of the intermittent map theta_gamma (neutral fixed point at 0);
//  - finitely truncated functions of linear processes f(sum_i a_i eta_{k-i}).
//
// Randomness: every simulation owns a std::mt19937_64 seeded with
// splitmix64(seed). Uniforms take the top 53 bits of each draw.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace depreg {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Replication seed from (master, n, r); independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n,
                          std::uint64_t replication) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  bool coin() noexcept { return (engine_() >> 63) != 0; }
  double gaussian() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

enum class Innovation { gaussian, rademacher, uniform };
enum class PostMap { identity, abs, squared };

struct Ar1Nonmixing {};

struct Intermittent {
  double gamma = 0.25;
};

struct LinearProcess {
  std::vector<double> coeffs;  // a_0 .. a_m
  Innovation innovation = Innovation::gaussian;
  PostMap post_map = PostMap::identity;
};

using ProcessKind = std::variant<Ar1Nonmixing, Intermittent, LinearProcess>;

inline constexpr std::size_t kDefaultBurnIn = 10000;
inline constexpr std::size_t kDefaultLinearTruncation = 64;

struct ProcessConfig {
  ProcessKind kind = Ar1Nonmixing{};
  double scale = 1.0;
  // Empty: kDefaultBurnIn for the intermittent map, 0 otherwise (the AR(1)
  // chain starts from its invariant law). Ignored by linear processes.
  std::optional<std::size_t> burn_in;
  std::uint64_t seed = 0;
};

std::size_t effective_burn_in(const ProcessConfig& config) noexcept;

/// Throws when scale <= 0, gamma is outside (0, 1/2), or coefficients are empty.
void validate(const ProcessConfig& config);

/// scale * (simulated series); uses the given seed instead of config.seed.
std::vector<double> simulate(const ProcessConfig& config, std::size_t n,
                             std::uint64_t seed);
inline std::vector<double> simulate(const ProcessConfig& config, std::size_t n) {
  return simulate(config, n, config.seed);
}

/// Unscaled AR(1) chain started from Uniform[-1/2, 1/2]; burn_in steps are
/// discarded before the n emitted values.
std::vector<double> simulate_ar1_nonmixing(std::size_t n, std::uint64_t seed,
                                           std::size_t burn_in = 0);

/// theta_gamma(x) = x (1 + (2x)^gamma) on [0, 1/2), 2x - 1 on [1/2, 1].
double theta_gamma(double x, double gamma);

/// x0 ~ Uniform(0, 1), burn_in iterations discarded, then the next n iterates.
/// Only the short-range regime gamma in (0, 1/2) is accepted.
std::vector<double> simulate_intermittent(std::size_t n, double gamma,
                                          std::size_t burn_in, std::uint64_t seed);
/// Orbit from a given starting point: theta(x0), theta^2(x0), ...
std::vector<double> intermittent_orbit(double x0, std::size_t n, double gamma,
                                       std::size_t burn_in = 0);

/// f(sum_{i=0}^{m} a_i eta_{k-i}) for k = 1..n, minus its mean over the window.
std::vector<double> simulate_linear_process(std::size_t n,
                                            const LinearProcess& process,
                                            std::uint64_t seed);

/// a_i = ratio^i for i < count.
std::vector<double> geometric_coefficients(double ratio,
                                           std::size_t count = kDefaultLinearTruncation);

}  // namespace depreg
