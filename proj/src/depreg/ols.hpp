#pragma once

#include "depreg/design.hpp"

#include <cstddef>
#include <vector>

namespace depreg {

struct FitResult {
  Vector beta_hat;
  Vector residuals;
  double rss = 0.0;
  Vector col_norms;

  Vector fitted(const DesignMatrix& x) const { return x.matrix() * beta_hat; }
};

/// Relative threshold on the pivots of the column-normalized R factor.
inline constexpr double kRankThreshold = 1e-10;

/// Least-squares solver with the design factorized once. The columns are
/// scaled to unit norm before a column-pivoted Householder QR; a pivot below
/// kRankThreshold relative to the largest one means rank deficiency.
class OlsSolver {
 public:
  explicit OlsSolver(const DesignMatrix& x);

  FitResult fit(const Vector& y) const;
  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return p_; }

 private:
  std::size_t n_;
  std::size_t p_;
  Vector norms_;
  Matrix x_;
  Eigen::ColPivHouseholderQR<Matrix> qr_;
};

FitResult fit(const DesignMatrix& x, const Vector& y);

struct NestedRss {
  double rss_full = 0.0;
  double rss_null = 0.0;
};

/// Complement of `tested` in 0..p-1: the columns kept under the null.
std::vector<std::size_t> null_model_columns(std::size_t p,
                                            const std::vector<std::size_t>& tested);

/// RSS of the full fit and of the fit restricted to the columns not tested.
/// Testing every column leaves an empty null model, which is rejected unless
/// allow_zero_model is set (then rss_null = ||y||^2).
NestedRss nested_rss(const DesignMatrix& x, const std::vector<std::size_t>& tested,
                     const Vector& y, bool allow_zero_model = false);

}  // namespace depreg
