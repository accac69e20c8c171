#pragma once

// Fixed regression designs and the finite-sample quantities used to judge
// whether a design is "regular": column norms d_j(n), Lindeberg-type ratios,
// lagged normalized cross products rho_{j,l}(k) and their limits for power
// columns i^alpha.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace depreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An n x p real design with n >= p >= 1, finite entries and no zero column.
class DesignMatrix {
 public:
  /// Throws Error(invalid_argument) when any invariant is violated.
  explicit DesignMatrix(Matrix x);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  const Matrix& matrix() const noexcept { return x_; }

  /// Design restricted to the given column indices, in the given order.
  DesignMatrix select_columns(const std::vector<std::size_t>& columns) const;

 private:
  Matrix x_;
};

/// d_j(n) = sqrt(sum_i x_{i,j}^2). Throws when a column is identically zero.
Vector column_norms(const Matrix& x);
Vector column_norms(const DesignMatrix& x);

/// max_i |x_{i,j}| / d_j(n); lies in (0, 1].
Vector lindeberg_ratios(const DesignMatrix& x);

/// rho_hat(k)_{j,l} = sum_{m=1}^{n-k} x_{m,j} x_{m+k,l} / (d_j d_l), 0 <= k < n.
Matrix empirical_rho(const DesignMatrix& x, std::size_t k);

struct LagDeviation {
  std::size_t lag = 0;
  double max_abs_deviation = 0.0;  // ||rho_hat(k) - rho_hat(0)||_inf (entrywise)
  bool regular = false;            // every entry within tolerance
};

struct RegularityReport {
  std::size_t n = 0;
  std::size_t p = 0;
  double tolerance = 0.0;
  Vector col_norms;
  Vector lindeberg;
  Matrix r0_hat;
  std::vector<LagDeviation> lags;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool r0_positive_definite = false;
  bool regular = false;  // all lags regular
};

inline constexpr double kDefaultRegularityTolerance = 0.01;
/// rho_hat(0) counts as positive definite when lambda_min > this * lambda_max.
inline constexpr double kPositiveDefiniteRatio = 1e-10;

RegularityReport regularity_report(const DesignMatrix& x,
                                   const std::vector<std::size_t>& lags,
                                   double tol = kDefaultRegularityTolerance);

/// Limit of rho_{j,l}(k) for columns i^{alpha_j}, i^{alpha_l}:
/// sqrt(2a_j+1) sqrt(2a_l+1) / (a_j + a_l + 1). Requires both exponents > -1/2.
double rho_regularly_varying(double alpha_j, double alpha_l);

struct LimitR0 {
  Matrix r0;
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
};

/// R(0) for pure power columns. Repeated exponents give a singular matrix;
/// that is reported through positive_definite, not thrown.
LimitR0 r0_from_alphas(const std::vector<double>& alphas);

/// Eigenvalues of a symmetric matrix in ascending order.
Vector symmetric_eigenvalues(const Matrix& m);

}  // namespace depreg
