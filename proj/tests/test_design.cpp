#include "depreg/design.hpp"
#include "depreg/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace depreg;

namespace {

Matrix power_columns(std::size_t n, std::initializer_list<double> alphas) {
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(alphas.size()));
  Eigen::Index j = 0;
  for (double a : alphas) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      x(i, j) = std::pow(static_cast<double>(i + 1), a);
    }
    ++j;
  }
  return x;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::normal_distribution<double> g;
  Matrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = g(rng);
  return x;
}

}  // namespace

TEST_CASE("design invariants are enforced") {
  CHECK_THROWS_AS(DesignMatrix(Matrix(2, 3)), Error);
  Matrix zero_col = Matrix::Ones(4, 2);
  zero_col.col(1).setZero();
  try {
    DesignMatrix d(zero_col);
    FAIL("zero column accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
    CHECK(std::string(e.what()).find("column 1") != std::string::npos);
  }
  Matrix nan = Matrix::Ones(3, 1);
  nan(1, 0) = std::nan("");
  CHECK_THROWS_AS(DesignMatrix{nan}, Error);
}

TEST_CASE("column norms") {
  CHECK(column_norms(DesignMatrix(Matrix::Identity(3, 3))).isApprox(Vector::Ones(3)));
  CHECK(column_norms(DesignMatrix(Matrix::Ones(100, 1)))[0] == doctest::Approx(10.0));
  // sum_{i<=1000} i^2 = 333833500 exactly.
  const Vector d = column_norms(DesignMatrix(power_columns(1000, {1.0})));
  CHECK(d[0] == doctest::Approx(std::sqrt(333833500.0)).epsilon(1e-14));
}

TEST_CASE("lindeberg ratios") {
  CHECK(lindeberg_ratios(DesignMatrix(Matrix::Ones(100, 1)))[0] == doctest::Approx(0.1));
  CHECK(lindeberg_ratios(DesignMatrix(power_columns(1000, {1.0})))[0] ==
        doctest::Approx(1000.0 / std::sqrt(333833500.0)));
  Matrix spike = Matrix::Zero(5, 1);
  spike(4, 0) = 1.0;
  CHECK(lindeberg_ratios(DesignMatrix(spike))[0] == 1.0);
}

TEST_CASE("empirical rho") {
  CHECK(empirical_rho(DesignMatrix(Matrix::Identity(3, 3)), 0).isApprox(Matrix::Identity(3, 3)));
  CHECK(empirical_rho(DesignMatrix(Matrix::Ones(100, 1)), 1)(0, 0) == doctest::Approx(0.99));
  const Matrix r = empirical_rho(DesignMatrix(power_columns(100000, {0.0, 1.0})), 0);
  CHECK(r(0, 1) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-4));
  CHECK_THROWS_AS(empirical_rho(DesignMatrix(Matrix::Ones(5, 1)), 5), Error);
}

TEST_CASE("empirical rho matches a direct double sum") {
  std::mt19937_64 rng(11);
  const Matrix x = random_matrix(rng, 37, 3);
  const DesignMatrix d(x);
  const Vector norms = column_norms(d);
  for (std::size_t k : {0u, 1u, 5u, 36u}) {
    const Matrix r = empirical_rho(d, k);
    for (Eigen::Index j = 0; j < 3; ++j) {
      for (Eigen::Index l = 0; l < 3; ++l) {
        double s = 0.0;
        for (Eigen::Index m = 0; m + static_cast<Eigen::Index>(k) < 37; ++m) {
          s += x(m, j) * x(m + static_cast<Eigen::Index>(k), l);
        }
        CHECK(r(j, l) == doctest::Approx(s / (norms[j] * norms[l])).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rho(0) is a PSD correlation-type matrix and |rho(k)| <= 1") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng() % 40);
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 4);
    const DesignMatrix d(random_matrix(rng, n, std::min(n, p)));
    const Matrix r0 = empirical_rho(d, 0);
    CHECK(r0.isApprox(r0.transpose()));
    CHECK(symmetric_eigenvalues(r0)[0] >= -1e-12);
    for (std::size_t k = 0; k < d.rows(); ++k) {
      CHECK(empirical_rho(d, k).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("power columns converge to the closed-form rho") {
  const double alphas[] = {0.0, 0.5, 1.0, 2.0};
  Matrix x = power_columns(100000, {0.0, 0.5, 1.0, 2.0});
  const DesignMatrix d(x);
  for (std::size_t k = 0; k <= 5; ++k) {
    const Matrix r = empirical_rho(d, k);
    for (int j = 0; j < 4; ++j) {
      for (int l = 0; l < 4; ++l) {
        CHECK(std::abs(r(j, l) - rho_regularly_varying(alphas[j], alphas[l])) < 1e-2);
      }
    }
  }
}

TEST_CASE("rho_regularly_varying") {
  CHECK(rho_regularly_varying(0, 0) == 1.0);
  CHECK(rho_regularly_varying(0, 1) == doctest::Approx(0.8660254037844386));
  CHECK(rho_regularly_varying(1, 1) == 1.0);
  for (double a : {-0.49, -0.25, 0.0, 0.3, 1.0, 7.5}) CHECK(rho_regularly_varying(a, a) == 1.0);
  CHECK_THROWS_AS(rho_regularly_varying(-0.5, 1.0), Error);
}

TEST_CASE("r0_from_alphas") {
  const LimitR0 a = r0_from_alphas({0.0, 1.0});
  CHECK(a.positive_definite);
  const Vector eig = symmetric_eigenvalues(a.r0);
  CHECK(eig[0] == doctest::Approx(1.0 - std::sqrt(3.0) / 2.0));
  CHECK(eig[1] == doctest::Approx(1.0 + std::sqrt(3.0) / 2.0));

  const LimitR0 b = r0_from_alphas({1.0, 1.0});
  CHECK(b.r0.isApprox(Matrix::Ones(2, 2)));
  CHECK_FALSE(b.positive_definite);

  const LimitR0 c = r0_from_alphas({0.0, 1.0, 2.0});
  CHECK(c.r0(0, 2) == doctest::Approx(std::sqrt(5.0) / 3.0));
  CHECK(c.positive_definite);
}

TEST_CASE("regularity report") {
  SUBCASE("identity is not regular at finite n") {
    const auto rep = regularity_report(DesignMatrix(Matrix::Identity(3, 3)), {0, 1});
    REQUIRE(rep.lags.size() == 2);
    CHECK(rep.lags[0].max_abs_deviation == 0.0);
    CHECK(rep.lags[1].max_abs_deviation == doctest::Approx(1.0));
    CHECK_FALSE(rep.regular);
    CHECK(rep.r0_positive_definite);
  }
  SUBCASE("intercept and trend are regular") {
    const auto rep = regularity_report(DesignMatrix(power_columns(100000, {0.0, 1.0})),
                                       {0, 1, 2, 3, 4, 5}, 0.01);
    CHECK(rep.regular);
    CHECK(rep.r0_positive_definite);
    CHECK(rep.lindeberg[0] == doctest::Approx(1.0 / std::sqrt(100000.0)));
  }
  SUBCASE("two-block ANOVA design deviates by O(k/n)") {
    const Eigen::Index n = 2000;
    Matrix x = Matrix::Zero(n, 2);
    x.topRows(n / 2).col(0).setOnes();
    x.bottomRows(n / 2).col(1).setOnes();
    const auto rep = regularity_report(DesignMatrix(x), {1, 2, 4});
    for (const auto& l : rep.lags) {
      // Direct sum: diagonal loses k/(n/2), the (0,1) entry gains k/(n/2).
      CHECK(l.max_abs_deviation == doctest::Approx(2.0 * l.lag / n));
    }
  }
}
