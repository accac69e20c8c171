#include "depreg/spectral.hpp"

#include "depreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace depreg {

double kernel_K(double x) noexcept {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a <= 2.0) return 2.0 - a;
  return 0.0;
}

double autocov(std::span<const double> series, long k) {
  const std::size_t n = series.size();
  const std::size_t lag = static_cast<std::size_t>(k < 0 ? -k : k);
  if (lag >= n) {
    throw Error(Errc::invalid_argument, "lag " + std::to_string(k) +
                                            " out of range for n = " +
                                            std::to_string(n));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j + lag < n; ++j) sum += series[j] * series[j + lag];
  return sum / static_cast<double>(n);
}

AcfEstimate acf(std::span<const double> series, std::size_t max_lag,
                AcfSource source) {
  const std::size_t n = series.size();
  if (max_lag >= n) {
    throw Error(Errc::invalid_argument, "max lag " + std::to_string(max_lag) +
                                            " out of range for n = " +
                                            std::to_string(n));
  }
  AcfEstimate out;
  out.n = n;
  out.source = source;
  out.values.resize(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    out.values[k] = autocov(series, static_cast<long>(k));
  }
  return out;
}

namespace {

void check_bandwidth(std::size_t n, std::size_t bandwidth) {
  if (bandwidth < 1 || n < 1 || 2 * bandwidth > n - 1) {
    throw Error(Errc::invalid_argument,
                "bandwidth " + std::to_string(bandwidth) +
                    " outside [1, (n-1)/2] for n = " + std::to_string(n));
  }
}

void check_frequency(double lambda) {
  if (!(std::abs(lambda) <= std::numbers::pi)) {
    throw Error(Errc::invalid_argument, "frequency must lie in [-pi, pi]");
  }
}

// gamma_0 + 2 sum_{k>=1} K(k/c) gamma_k cos(k lambda), i.e. 2 pi f*_n(lambda).
double weighted_sum(const AcfEstimate& acf, std::size_t bandwidth, double lambda) {
  const std::size_t last = 2 * bandwidth;
  if (acf.max_lag() < last) {
    throw Error(Errc::invalid_argument,
                "autocovariances stop at lag " + std::to_string(acf.max_lag()) +
                    ", bandwidth needs lag " + std::to_string(last));
  }
  const double c = static_cast<double>(bandwidth);
  double sum = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    const double w = kernel_K(static_cast<double>(k) / c);
    if (w == 0.0) continue;
    sum += w * acf.values[k] * std::cos(static_cast<double>(k) * lambda);
  }
  return acf.values[0] + 2.0 * sum;
}

}  // namespace

double spectral_density(const AcfEstimate& acf, std::size_t bandwidth,
                        double lambda) {
  check_bandwidth(acf.n, bandwidth);
  check_frequency(lambda);
  return weighted_sum(acf, bandwidth, lambda) / (2.0 * std::numbers::pi);
}

double spectral_density(std::span<const double> residuals, std::size_t bandwidth,
                        double lambda) {
  check_bandwidth(residuals.size(), bandwidth);
  return spectral_density(acf(residuals, 2 * bandwidth), bandwidth, lambda);
}

std::vector<double> spectral_density(std::span<const double> residuals,
                                     std::size_t bandwidth,
                                     std::span<const double> lambdas) {
  check_bandwidth(residuals.size(), bandwidth);
  const AcfEstimate est = acf(residuals, 2 * bandwidth);
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) out.push_back(spectral_density(est, bandwidth, lambda));
  return out;
}

std::size_t LrvEstimate::bandwidth() const noexcept {
  if (const auto* k = std::get_if<KernelF0>(&method)) return k->bandwidth;
  return std::get<Truncated>(method).a_n;
}

std::size_t required_lag(const LrvMethod& method) noexcept {
  if (const auto* k = std::get_if<KernelF0>(&method)) return 2 * k->bandwidth;
  return std::get<Truncated>(method).a_n;
}

LrvEstimate lrv(const AcfEstimate& acf, const LrvMethod& method) {
  LrvEstimate out;
  out.method = method;
  if (const auto* k = std::get_if<KernelF0>(&method)) {
    check_bandwidth(acf.n, k->bandwidth);
    out.value = weighted_sum(acf, k->bandwidth, 0.0);
  } else {
    const auto& t = std::get<Truncated>(method);
    if (t.a_n >= acf.n) {
      throw Error(Errc::invalid_argument, "a_n = " + std::to_string(t.a_n) +
                                              " must be smaller than n = " +
                                              std::to_string(acf.n));
    }
    if (acf.max_lag() < t.a_n) {
      throw Error(Errc::invalid_argument,
                  "autocovariances stop before lag a_n = " + std::to_string(t.a_n));
    }
    double tail = 0.0;
    for (std::size_t k = 1; k <= t.a_n; ++k) tail += acf.values[k];
    out.value = acf.values[0] + (t.symmetrized ? 2.0 : 1.0) * tail;
  }
  out.nonpositive = !(out.value > 0.0);
  return out;
}

LrvEstimate lrv(std::span<const double> residuals, const LrvMethod& method) {
  const std::size_t lag = required_lag(method);
  if (lag >= residuals.size()) {
    throw Error(Errc::invalid_argument,
                "method needs lag " + std::to_string(lag) + " but n = " +
                    std::to_string(residuals.size()));
  }
  if (const auto* k = std::get_if<KernelF0>(&method)) {
    check_bandwidth(residuals.size(), k->bandwidth);
  }
  return lrv(acf(residuals, lag), method);
}

std::size_t default_bandwidth(std::size_t n, double delta) {
  if (n < 4) {
    throw Error(Errc::invalid_argument, "default bandwidth needs n >= 4");
  }
  if (!(delta > 0.0 && delta <= 2.0)) {
    throw Error(Errc::invalid_argument, "moment margin delta must lie in (0, 2]");
  }
  const double exponent = 0.9 * delta / (delta + 2.0);
  const auto raw = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(n), exponent)));
  return std::clamp<std::size_t>(raw, 1, (n - 1) / 2);
}

}  // namespace depreg
