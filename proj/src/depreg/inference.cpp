#include "depreg/inference.hpp"

#include "depreg/errors.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace depreg {

double chi2_sf(double x, int dof) {
  if (dof < 1) throw Error(Errc::invalid_argument, "chi-square dof must be >= 1");
  if (std::isnan(x) || x < 0.0) {
    throw Error(Errc::invalid_argument, "chi-square argument must be >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double fisher_sf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw Error(Errc::invalid_argument, "Fisher degrees of freedom must be positive");
  }
  if (std::isnan(x) || x < 0.0) {
    throw Error(Errc::invalid_argument, "Fisher argument must be >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  boost::math::fisher_f_distribution<double> law(d1, d2);
  return boost::math::cdf(boost::math::complement(law, x));
}

namespace {

// rss0 - rss, with round-off nesting violations down to -1e-9 rss0 clamped.
double rss_drop(double rss0, double rss) {
  if (!std::isfinite(rss0) || !std::isfinite(rss) || rss < 0.0) {
    throw Error(Errc::invalid_argument, "residual sums must be finite and >= 0");
  }
  const double drop = rss0 - rss;
  if (drop >= 0.0) return drop;
  if (drop >= -1e-9 * rss0) return 0.0;
  throw Error(Errc::invalid_argument,
              "null-model RSS is smaller than full-model RSS");
}

double chi2_over_dof_p_value(double statistic, std::size_t dof) {
  return chi2_sf(static_cast<double>(dof) * statistic, static_cast<int>(dof));
}

}  // namespace

TestResult fisher_classic(double rss0, double rss, std::size_t n, std::size_t p,
                          std::size_t p0, Reference reference) {
  if (!(n > p && p > p0)) {
    throw Error(Errc::invalid_argument, "need n > p > p0");
  }
  const double drop = rss_drop(rss0, rss);
  if (!(rss > 0.0)) {
    throw Error(Errc::degenerate_fit, "full-model RSS is zero (noiseless fit)");
  }
  TestResult out;
  out.method = TestMethod::classic_F;
  out.numerator_dof = p - p0;
  out.reference = reference;
  const double sigma2 = rss / static_cast<double>(n - p);
  out.statistic = drop / (static_cast<double>(p - p0) * sigma2);
  out.p_value = reference == Reference::fisher
                    ? fisher_sf(out.statistic, static_cast<double>(p - p0),
                                static_cast<double>(n - p))
                    : chi2_over_dof_p_value(out.statistic, p - p0);
  return out;
}

TestResult fisher_corrected(double rss0, double rss, const LrvEstimate& lrv,
                            std::size_t p, std::size_t p0) {
  if (!(p > p0)) throw Error(Errc::invalid_argument, "need p > p0");
  if (lrv.nonpositive || !(lrv.value > 0.0)) {
    throw Error(Errc::nonpositive_lrv,
                "long-run variance estimate is not positive; change a_n or the "
                "bandwidth");
  }
  const double drop = rss_drop(rss0, rss);
  TestResult out;
  out.method = std::holds_alternative<KernelF0>(lrv.method)
                   ? TestMethod::corrected_kernel
                   : TestMethod::corrected_truncated;
  out.numerator_dof = p - p0;
  out.reference = Reference::chi2_over_dof;
  out.statistic = drop / (static_cast<double>(p - p0) * lrv.value);
  out.p_value = chi2_over_dof_p_value(out.statistic, p - p0);
  return out;
}

Matrix symmetric_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::domain, "eigendecomposition failed");
  }
  Vector lambda = solver.eigenvalues();
  const double floor = 1e-12 * lambda.maxCoeff();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda[i] = lambda[i] < floor ? 0.0 : std::sqrt(lambda[i]);
  }
  return solver.eigenvectors() * lambda.asDiagonal() *
         solver.eigenvectors().transpose();
}

Vector studentize(const FitResult& fit, const Matrix& r0, const LrvEstimate& lrv,
                  const Vector& beta0) {
  const auto p = fit.beta_hat.size();
  if (r0.rows() != p || r0.cols() != p || beta0.size() != p) {
    throw Error(Errc::invalid_argument, "dimension mismatch in studentize");
  }
  if (!r0.isApprox(r0.transpose(), 1e-12)) {
    throw Error(Errc::domain, "R(0) must be symmetric");
  }
  const Vector eig = symmetric_eigenvalues(r0);
  if (!(eig[0] > kPositiveDefiniteRatio * eig[p - 1])) {
    throw Error(Errc::domain, "R(0) is not positive definite");
  }
  if (lrv.nonpositive || !(lrv.value > 0.0)) {
    throw Error(Errc::nonpositive_lrv, "long-run variance estimate is not positive");
  }
  const Vector scaled = fit.col_norms.cwiseProduct(fit.beta_hat - beta0);
  return symmetric_sqrt(r0) * scaled / std::sqrt(lrv.value);
}

NestedTest nested_test(const DesignMatrix& x, const std::vector<std::size_t>& tested,
                       const Vector& y, const LrvMethod& method,
                       Reference classic_reference) {
  const auto keep = null_model_columns(x.cols(), tested);
  if (keep.empty()) {
    throw Error(Errc::invalid_argument,
                "testing every column leaves an empty null model");
  }
  NestedTest out;
  out.full = fit(x, y);
  out.rss_null = fit(x.select_columns(keep), y).rss;
  out.p0 = keep.size();
  if (!(out.full.rss > 1e-20 * y.squaredNorm())) {
    throw Error(Errc::degenerate_fit, "full-model RSS is zero (noiseless fit)");
  }
  const auto& r = out.full.residuals;
  out.lrv = lrv(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())),
                method);
  out.classic = fisher_classic(out.rss_null, out.full.rss, x.rows(), x.cols(),
                               out.p0, classic_reference);
  out.corrected = fisher_corrected(out.rss_null, out.full.rss, out.lrv, x.cols(),
                                   out.p0);
  return out;
}

}  // namespace depreg
