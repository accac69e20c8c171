#pragma once

#include "depreg/design.hpp"
#include "depreg/ols.hpp"
#include "depreg/spectral.hpp"

#include <cstddef>
#include <vector>

namespace depreg {

enum class TestMethod { classic_F, corrected_kernel, corrected_truncated };
enum class Reference { chi2_over_dof, fisher };

struct TestResult {
  double statistic = 0.0;
  std::size_t numerator_dof = 0;  // p - p0
  TestMethod method = TestMethod::classic_F;
  double p_value = 1.0;
  Reference reference = Reference::chi2_over_dof;
};

/// Upper tail of chi^2_k at x, Q(k/2, x/2).
double chi2_sf(double x, int dof);
/// Upper tail of the Fisher(d1, d2) law at x.
double fisher_sf(double x, double d1, double d2);

/// Classic F = (rss0 - rss) / ((p - p0) rss / (n - p)).
TestResult fisher_classic(double rss0, double rss, std::size_t n, std::size_t p,
                          std::size_t p0,
                          Reference reference = Reference::chi2_over_dof);

/// (rss0 - rss) / ((p - p0) * lrv.value), referred to chi^2_{p-p0}/(p-p0).
/// A nonpositive long-run variance is an error: pick another bandwidth.
TestResult fisher_corrected(double rss0, double rss, const LrvEstimate& lrv,
                            std::size_t p, std::size_t p0);

/// Symmetric square root through the eigendecomposition; eigenvalues below
/// 1e-12 * lambda_max are floored at zero.
Matrix symmetric_sqrt(const Matrix& m);

/// R(0)^{1/2} D(n) (beta_hat - beta0) / sqrt(lrv.value): approximately
/// N(0, I_p) under a regular design.
Vector studentize(const FitResult& fit, const Matrix& r0, const LrvEstimate& lrv,
                  const Vector& beta0);

struct NestedTest {
  FitResult full;
  double rss_null = 0.0;
  std::size_t p0 = 0;
  LrvEstimate lrv;
  TestResult classic;
  TestResult corrected;
};

/// Fits the full and null models and evaluates both statistics on one data
/// set. Residual sums below 1e-20 ||y||^2 are treated as a noiseless fit.
NestedTest nested_test(const DesignMatrix& x, const std::vector<std::size_t>& tested,
                       const Vector& y, const LrvMethod& method,
                       Reference classic_reference = Reference::chi2_over_dof);

}  // namespace depreg
