#include "depreg/processes.hpp"

#include "depreg/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace depreg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n,
                          std::uint64_t replication) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ n);
  return splitmix64(h ^ (replication * 0xd1b54a32d192ed03ULL));
}

namespace {

void check_short_range(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw Error(Errc::domain,
                "intermittent map exponent must lie in (0, 1/2); gamma >= 1/2 "
                "gives long-range dependence");
  }
}

}  // namespace

void validate(const ProcessConfig& config) {
  if (!(config.scale > 0.0) || !std::isfinite(config.scale)) {
    throw Error(Errc::invalid_argument, "process scale must be positive");
  }
  if (const auto* im = std::get_if<Intermittent>(&config.kind)) {
    check_short_range(im->gamma);
  }
  if (const auto* lp = std::get_if<LinearProcess>(&config.kind)) {
    if (lp->coeffs.empty()) {
      throw Error(Errc::invalid_argument, "linear process needs coefficients");
    }
  }
}

std::size_t effective_burn_in(const ProcessConfig& config) noexcept {
  if (config.burn_in) return *config.burn_in;
  return std::holds_alternative<Intermittent>(config.kind) ? kDefaultBurnIn : 0;
}

std::vector<double> simulate(const ProcessConfig& config, std::size_t n,
                             std::uint64_t seed) {
  validate(config);
  std::vector<double> out = std::visit(
      [&](const auto& kind) -> std::vector<double> {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Ar1Nonmixing>) {
          return simulate_ar1_nonmixing(n, seed, effective_burn_in(config));
        } else if constexpr (std::is_same_v<T, Intermittent>) {
          return simulate_intermittent(n, kind.gamma, effective_burn_in(config), seed);
        } else {
          return simulate_linear_process(n, kind, seed);
        }
      },
      config.kind);
  if (config.scale != 1.0) {
    for (double& v : out) v *= config.scale;
  }
  return out;
}

std::vector<double> simulate_ar1_nonmixing(std::size_t n, std::uint64_t seed,
                                           std::size_t burn_in) {
  Rng rng(seed);
  double e = rng.uniform() - 0.5;
  auto step = [&] { e = 0.5 * (e + (rng.coin() ? 0.5 : -0.5)); };
  for (std::size_t i = 0; i < burn_in; ++i) step();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) step();
    out.push_back(e);
  }
  return out;
}

double theta_gamma(double x, double gamma) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(Errc::domain, "intermittent map argument must lie in [0, 1]");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(Errc::domain, "intermittent map exponent must lie in (0, 1)");
  }
  if (x < 0.5) return x * (1.0 + std::pow(2.0 * x, gamma));
  return 2.0 * x - 1.0;
}

std::vector<double> intermittent_orbit(double x0, std::size_t n, double gamma,
                                       std::size_t burn_in) {
  double x = x0;
  for (std::size_t i = 0; i < burn_in; ++i) x = theta_gamma(x, gamma);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    x = theta_gamma(x, gamma);
    out.push_back(x);
  }
  return out;
}

std::vector<double> simulate_intermittent(std::size_t n, double gamma,
                                          std::size_t burn_in, std::uint64_t seed) {
  check_short_range(gamma);
  Rng rng(seed);
  return intermittent_orbit(rng.uniform_open(), n, gamma, burn_in);
}

std::vector<double> simulate_linear_process(std::size_t n,
                                            const LinearProcess& process,
                                            std::uint64_t seed) {
  const auto& a = process.coeffs;
  if (a.empty()) {
    throw Error(Errc::invalid_argument, "linear process needs coefficients");
  }
  const std::size_t m = a.size() - 1;
  Rng rng(seed);
  std::vector<double> eta(n + m);
  for (double& v : eta) {
    switch (process.innovation) {
      case Innovation::gaussian: v = rng.gaussian(); break;
      case Innovation::rademacher: v = rng.coin() ? 1.0 : -1.0; break;
      case Innovation::uniform: v = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0); break;
    }
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // eta[k + m] is the innovation at time k; eta[k + m - i] lags it by i.
    double s = 0.0;
    for (std::size_t i = 0; i <= m; ++i) s += a[i] * eta[k + m - i];
    switch (process.post_map) {
      case PostMap::identity: break;
      case PostMap::abs: s = std::abs(s); break;
      case PostMap::squared: s = s * s; break;
    }
    out[k] = s;
  }
  if (n > 0) {
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) /
                        static_cast<double>(n);
    for (double& v : out) v -= mean;
  }
  return out;
}

std::vector<double> geometric_coefficients(double ratio, std::size_t count) {
  std::vector<double> a(count);
  double c = 1.0;
  for (double& v : a) {
    v = c;
    c *= ratio;
  }
  return a;
}

}  // namespace depreg
