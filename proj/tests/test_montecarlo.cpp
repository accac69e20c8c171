#include "depreg/errors.hpp"
#include "depreg/montecarlo.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace depreg;

namespace {

ExperimentSpec example1(std::size_t reps) {
  ExperimentSpec s;
  s.process.scale = 10.0;
  s.replications = reps;
  s.master_seed = 42;
  return s;
}

}  // namespace

TEST_CASE("designs") {
  const DesignMatrix a = build_design(DesignKind::intercept_linear, 3);
  CHECK(a.matrix().isApprox(Matrix{{1, 1}, {1, 2}, {1, 3}}));
  const DesignMatrix b = build_design(DesignKind::intercept_quadratic, 12);
  CHECK(b.matrix().row(9).isApprox(Eigen::RowVector3d(1, 10, 100)));
  const DesignMatrix c = build_design(DesignKind::intercept_sqrt_log, 12);
  CHECK(c.matrix().row(0).isApprox(Eigen::RowVector3d(1, 1, 0)));
  CHECK(c.matrix()(3, 2) == doctest::Approx(std::log(4.0)));
  CHECK_THROWS_AS(build_design(DesignKind::intercept_linear, 2), Error);
}

TEST_CASE("spec validation") {
  ExperimentSpec s = example1(10);
  s.beta = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(validate(s), Error);
  s = example1(0);
  CHECK_THROWS_AS(validate(s), Error);
  s = example1(10);
  s.alpha = 1.0;
  CHECK_THROWS_AS(validate(s), Error);
  s = example1(10);
  s.null_cols = {0, 1};
  CHECK_THROWS_AS(validate(s), Error);
  s = example1(10);
  s.a_n = 1000;
  CHECK_THROWS_AS(validate(s), Error);
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  ExperimentSpec s = example1(300);
  s.n_values = {200, 400};
  s.a_n = 3;
  const TableResult a = run_experiment(s, 1);
  const TableResult b = run_experiment(s, 3);
  REQUIRE(a.rows.size() == 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].n == s.n_values[i]);
    CHECK(a.rows[i].rejection_frequency == b.rows[i].rejection_frequency);
    CHECK(a.rows[i].mean_statistic == b.rows[i].mean_statistic);
    CHECK(a.rows[i].alternate_frequency == b.rows[i].alternate_frequency);
    CHECK(a.rows[i].rejection_frequency >= 0.0);
    CHECK(a.rows[i].rejection_frequency <= 1.0);
  }
}

TEST_CASE("one-sided convention rejects more often than the symmetrized one") {
  ExperimentSpec s = example1(400);
  s.a_n = 3;
  const TableResult t = run_experiment(s, 1);
  CHECK(t.rows[0].alternate_frequency.value() > t.rows[0].rejection_frequency);
}

TEST_CASE("level is stable across master seeds") {
  ExperimentSpec s = example1(2000);
  s.a_n = 3;
  s.master_seed = 1;
  const double f1 = run_experiment(s, 0).rows[0].rejection_frequency;
  s.master_seed = 2;
  const double f2 = run_experiment(s, 0).rows[0].rejection_frequency;
  const double pooled = 0.5 * (f1 + f2);
  CHECK(std::abs(f1 - f2) <= 4.0 * std::sqrt(pooled * (1.0 - pooled) / 2000.0));
}

TEST_CASE("power grows with n") {
  ExperimentSpec s = example1(500);
  s.beta = {3.0, 0.005};
  s.a_n = 3;
  s.n_values = {200, 800};
  const TableResult t = run_experiment(s, 0);
  CHECK(t.rows[1].rejection_frequency >= t.rows[0].rejection_frequency);
}

TEST_CASE("kernel method and nonpositive counting") {
  ExperimentSpec s = example1(200);
  s.statistic = StatisticKind::corrected_kernel;
  const TableResult t = run_experiment(s, 0);
  CHECK_FALSE(t.rows[0].alternate_frequency.has_value());
  CHECK(t.rows[0].rejection_frequency < 0.2);

  // White noise with a_n near n/2 makes nonpositive estimates common; they are
  // counted and never rejected.
  ExperimentSpec w = example1(200);
  w.process.kind = LinearProcess{{1.0}};
  w.n_values = {20};
  w.a_n = 15;
  const TableResult u = run_experiment(w, 0);
  CHECK(u.rows[0].nonpositive_lrv_count > 0);
  CHECK(u.rows[0].rejection_frequency <=
        1.0 - static_cast<double>(u.rows[0].nonpositive_lrv_count) / 200.0);
}

TEST_CASE("exact Fisher calibration under i.i.d. Gaussian errors") {
  ExperimentSpec s;
  s.process.kind = LinearProcess{{1.0}};
  s.beta = {0.0, 0.0};
  s.statistic = StatisticKind::classic;
  s.reference = Reference::fisher;
  s.n_values = {50};
  s.replications = 2000;
  s.master_seed = 9;
  const double f = run_experiment(s, 0).rows[0].rejection_frequency;
  CHECK(std::abs(f - 0.05) <= 2.0 * std::sqrt(0.05 * 0.95 / 2000.0));
}

TEST_CASE("acf reports") {
  const std::vector<double> zeros(30, 0.0);
  for (const auto& [k, v] : acf_report(zeros, 5)) CHECK(v == 0.0);

  ExperimentSpec s = example1(1);
  const AcfPoints pts = acf_report(s, 600, 10);
  REQUIRE(pts.size() == 11);
  CHECK(pts[0].first == 0);
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK(pts[k].second / pts[0].second ==
          doctest::Approx(std::pow(2.0, -static_cast<double>(k))).epsilon(0.35));
  }
  for (std::size_t k = 6; k <= 10; ++k) CHECK(std::abs(pts[k].second / pts[0].second) < 0.1);
}

TEST_CASE("intermittent residual autocovariances decay more slowly") {
  ExperimentSpec s = example1(1);
  s.process.kind = Intermittent{0.25};
  double slow = 0.0, fast = 0.0;
  for (std::size_t r = 0; r < 20; ++r) {
    const AcfPoints a = acf_report(s, 2000, 6, r);
    slow += a[5].second / a[0].second;
  }
  s.process.kind = Ar1Nonmixing{};
  for (std::size_t r = 0; r < 20; ++r) {
    const AcfPoints a = acf_report(s, 2000, 6, r);
    fast += a[5].second / a[0].second;
  }
  CHECK(slow / 20.0 > 0.05);
  CHECK(slow > 3.0 * fast);
}
