#include "depreg/ols.hpp"

#include "depreg/errors.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace depreg {

OlsSolver::OlsSolver(const DesignMatrix& x)
    : n_(x.rows()), p_(x.cols()), norms_(column_norms(x)), x_(x.matrix()) {
  Matrix scaled = x_ * norms_.cwiseInverse().asDiagonal();
  qr_.setThreshold(kRankThreshold);
  qr_.compute(scaled);
  if (static_cast<std::size_t>(qr_.rank()) < p_) {
    throw Error(Errc::rank_deficient,
                "design has numerical rank " + std::to_string(qr_.rank()) +
                    " < " + std::to_string(p_) + " columns");
  }
}

FitResult OlsSolver::fit(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != n_) {
    throw Error(Errc::invalid_argument,
                "response has length " + std::to_string(y.size()) +
                    ", design has " + std::to_string(n_) + " rows");
  }
  if (!y.allFinite()) {
    throw Error(Errc::invalid_argument, "response contains non-finite values");
  }
  FitResult out;
  out.beta_hat = norms_.cwiseInverse().asDiagonal() * qr_.solve(y);
  out.residuals = y - x_ * out.beta_hat;
  out.rss = out.residuals.squaredNorm();
  out.col_norms = norms_;
  return out;
}

FitResult fit(const DesignMatrix& x, const Vector& y) {
  return OlsSolver(x).fit(y);
}

std::vector<std::size_t> null_model_columns(
    std::size_t p, const std::vector<std::size_t>& tested) {
  std::set<std::size_t> drop;
  for (std::size_t c : tested) {
    if (c >= p) {
      throw Error(Errc::invalid_argument,
                  "tested column " + std::to_string(c) + " out of range for p = " +
                      std::to_string(p));
    }
    if (!drop.insert(c).second) {
      throw Error(Errc::invalid_argument,
                  "tested column " + std::to_string(c) + " listed twice");
    }
  }
  if (drop.empty()) {
    throw Error(Errc::invalid_argument, "the tested column set is empty");
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < p; ++j) {
    if (!drop.count(j)) keep.push_back(j);
  }
  return keep;
}

NestedRss nested_rss(const DesignMatrix& x, const std::vector<std::size_t>& tested,
                     const Vector& y, bool allow_zero_model) {
  const auto keep = null_model_columns(x.cols(), tested);
  NestedRss out;
  out.rss_full = fit(x, y).rss;
  if (keep.empty()) {
    if (!allow_zero_model) {
      throw Error(Errc::invalid_argument,
                  "testing every column leaves an empty null model");
    }
    out.rss_null = y.squaredNorm();
  } else {
    out.rss_null = fit(x.select_columns(keep), y).rss;
  }
  return out;
}

}  // namespace depreg
