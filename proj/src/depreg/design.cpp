#include "depreg/design.hpp"

#include "depreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace depreg {

DesignMatrix::DesignMatrix(Matrix x) : x_(std::move(x)) {
  if (x_.cols() < 1) {
    throw Error(Errc::invalid_argument, "design must have at least one column");
  }
  if (x_.rows() < x_.cols()) {
    throw Error(Errc::invalid_argument,
                "design has fewer rows (" + std::to_string(x_.rows()) +
                    ") than columns (" + std::to_string(x_.cols()) + ")");
  }
  if (!x_.allFinite()) {
    throw Error(Errc::invalid_argument, "design contains non-finite entries");
  }
  column_norms(x_);
}

DesignMatrix DesignMatrix::select_columns(
    const std::vector<std::size_t>& columns) const {
  Matrix sub(x_.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= cols()) {
      throw Error(Errc::invalid_argument,
                  "column index " + std::to_string(columns[c]) + " out of range");
    }
    sub.col(static_cast<Eigen::Index>(c)) =
        x_.col(static_cast<Eigen::Index>(columns[c]));
  }
  return DesignMatrix(std::move(sub));
}

Vector column_norms(const Matrix& x) {
  Vector norms = x.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < norms.size(); ++j) {
    if (!(norms[j] > 0.0)) {
      throw Error(Errc::invalid_argument,
                  "column " + std::to_string(j) + " is identically zero");
    }
  }
  return norms;
}

Vector column_norms(const DesignMatrix& x) { return column_norms(x.matrix()); }

Vector lindeberg_ratios(const DesignMatrix& x) {
  const Vector norms = column_norms(x);
  Vector ratios(norms.size());
  for (Eigen::Index j = 0; j < norms.size(); ++j) {
    ratios[j] = x.matrix().col(j).cwiseAbs().maxCoeff() / norms[j];
  }
  return ratios;
}

Matrix empirical_rho(const DesignMatrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  if (k >= n) {
    throw Error(Errc::invalid_argument, "lag " + std::to_string(k) +
                                            " must be smaller than n = " +
                                            std::to_string(n));
  }
  const auto& m = x.matrix();
  const auto len = static_cast<Eigen::Index>(n - k);
  const auto shift = static_cast<Eigen::Index>(k);
  Matrix cross = m.topRows(len).transpose() * m.middleRows(shift, len);
  const Vector norms = column_norms(x);
  return norms.cwiseInverse().asDiagonal() * cross *
         norms.cwiseInverse().asDiagonal();
}

Vector symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

RegularityReport regularity_report(const DesignMatrix& x,
                                   const std::vector<std::size_t>& lags,
                                   double tol) {
  RegularityReport report;
  report.n = x.rows();
  report.p = x.cols();
  report.tolerance = tol;
  report.col_norms = column_norms(x);
  report.lindeberg = lindeberg_ratios(x);
  report.r0_hat = empirical_rho(x, 0);
  report.regular = true;
  for (std::size_t k : lags) {
    const Matrix rho = empirical_rho(x, k);
    LagDeviation dev;
    dev.lag = k;
    dev.max_abs_deviation = (rho - report.r0_hat).cwiseAbs().maxCoeff();
    dev.regular = dev.max_abs_deviation <= tol;
    report.regular = report.regular && dev.regular;
    report.lags.push_back(dev);
  }
  const Vector eig = symmetric_eigenvalues(report.r0_hat);
  report.min_eigenvalue = eig[0];
  report.max_eigenvalue = eig[eig.size() - 1];
  report.r0_positive_definite =
      report.min_eigenvalue > kPositiveDefiniteRatio * report.max_eigenvalue;
  return report;
}

double rho_regularly_varying(double alpha_j, double alpha_l) {
  if (!(alpha_j > -0.5) || !(alpha_l > -0.5)) {
    throw Error(Errc::domain, "power exponents must exceed -1/2");
  }
  if (alpha_j == alpha_l) return 1.0;
  return std::sqrt(2.0 * alpha_j + 1.0) * std::sqrt(2.0 * alpha_l + 1.0) /
         (alpha_j + alpha_l + 1.0);
}

LimitR0 r0_from_alphas(const std::vector<double>& alphas) {
  if (alphas.empty()) {
    throw Error(Errc::invalid_argument, "at least one exponent is required");
  }
  const auto p = static_cast<Eigen::Index>(alphas.size());
  LimitR0 out;
  out.r0.resize(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index l = 0; l < p; ++l) {
      out.r0(j, l) = rho_regularly_varying(alphas[static_cast<std::size_t>(j)],
                                           alphas[static_cast<std::size_t>(l)]);
    }
  }
  const Vector eig = symmetric_eigenvalues(out.r0);
  out.min_eigenvalue = eig[0];
  out.positive_definite = eig[0] > kPositiveDefiniteRatio * eig[p - 1];
  return out;
}

}  // namespace depreg
