#pragma once

// Sample autocovariances with the 1/n divisor, the flat-top lag-window
// spectral density estimator and the long-run variance sum_k gamma(k)
// estimated from regression residuals.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace depreg {

/// Flat-top trapezoid: 1 on |x| <= 1, 2 - |x| on 1 <= |x| <= 2, 0 beyond.
double kernel_K(double x) noexcept;

enum class AcfSource { raw_series, residuals };

struct AcfEstimate {
  std::vector<double> values;  // gamma*_0 .. gamma*_K
  std::size_t n = 0;
  AcfSource source = AcfSource::residuals;

  std::size_t max_lag() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// (1/n) sum_{j=1}^{n-|k|} s_j s_{j+|k|}, no mean-centering. |k| < n.
double autocov(std::span<const double> series, long k);

/// All autocovariances up to max_lag < n in one pass.
AcfEstimate acf(std::span<const double> series, std::size_t max_lag,
                AcfSource source = AcfSource::residuals);

/// Lag-window estimate f*_n(lambda). Requires 1 <= bandwidth, 2*bandwidth <= n-1,
/// lambda in [-pi, pi].
double spectral_density(std::span<const double> residuals, std::size_t bandwidth,
                        double lambda);
/// Same, from precomputed autocovariances (which must reach lag 2*bandwidth).
double spectral_density(const AcfEstimate& acf, std::size_t bandwidth, double lambda);
std::vector<double> spectral_density(std::span<const double> residuals,
                                     std::size_t bandwidth,
                                     std::span<const double> lambdas);

struct KernelF0 {
  std::size_t bandwidth = 1;  // c_n
};

struct Truncated {
  std::size_t a_n = 0;
  // false: gamma_0 + sum_{k=1}^{a_n} gamma_k, one-sided as the sum is usually
  // printed; true: gamma_0 + 2 sum_{k=1}^{a_n} gamma_k, which targets
  // sum_{k in Z} gamma(k).
  bool symmetrized = true;
};

using LrvMethod = std::variant<KernelF0, Truncated>;

struct LrvEstimate {
  double value = 0.0;
  LrvMethod method;
  bool nonpositive = false;

  std::size_t bandwidth() const noexcept;
};

LrvEstimate lrv(std::span<const double> residuals, const LrvMethod& method);
LrvEstimate lrv(const AcfEstimate& acf, const LrvMethod& method);

/// Highest autocovariance lag an LRV method reads.
std::size_t required_lag(const LrvMethod& method) noexcept;

/// c_n = max(1, floor(n^{0.9 delta/(delta+2)})), clamped to floor((n-1)/2).
/// For delta = 2 this is floor(n^0.45), so c_n -> inf and c_n^2/n -> 0.
std::size_t default_bandwidth(std::size_t n, double delta = 2.0);

}  // namespace depreg
