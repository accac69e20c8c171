#include "depreg/errors.hpp"
#include "depreg/montecarlo.hpp"
#include "depreg/serialize.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace depreg;
using nlohmann::json;

TEST_CASE("experiment specs round-trip through JSON") {
  ExperimentSpec s;
  s.design_kind = DesignKind::intercept_sqrt_log;
  s.beta = {3.0, 0.0, 0.2};
  s.null_cols = {1, 2};
  s.process.kind = Intermittent{0.3};
  s.process.scale = 10.0;
  s.n_values = {500, 1000};
  s.statistic = StatisticKind::corrected_kernel;
  s.bandwidth = 7;
  s.replications = 123;
  s.alpha = 0.1;
  s.master_seed = 0xdeadbeefcafeULL;
  const ExperimentSpec back = experiment_from_json(experiment_to_json(s));
  CHECK(experiment_to_json(back) == experiment_to_json(s));
  CHECK(back.master_seed == s.master_seed);
  CHECK(back.bandwidth == s.bandwidth);
  CHECK(effective_burn_in(back.process) == kDefaultBurnIn);
}

TEST_CASE("config defaults and strictness") {
  const ExperimentSpec d = experiment_from_json("{}");
  CHECK(d.replications == 2000);
  CHECK(d.alpha == 0.05);
  CHECK(d.beta == std::vector<double>{3.0, 0.0});
  CHECK(d.null_cols == std::vector<std::size_t>{1});
  CHECK(d.symmetrized);

  const ExperimentSpec q = experiment_from_json(R"({"design_kind": "intercept_quadratic"})");
  CHECK(q.null_cols == std::vector<std::size_t>{1, 2});

  const auto code_of = [](const char* text) {
    try {
      experiment_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io;
  };
  CHECK(code_of(R"({"replicatons": 3})") == Errc::parse);
  CHECK(code_of(R"({"method": "bogus"})") == Errc::parse);
  CHECK(code_of(R"({"process": {"kind": "intermittent", "gamma": 0.6}})") == Errc::domain);
  CHECK(code_of("{not json") == Errc::parse);
  CHECK(code_of(R"({"a_n": "three"})") == Errc::parse);
  CHECK(code_of(R"({"replications": -1})") == Errc::parse);
  CHECK(code_of(R"({"n_values": [100, -5]})") == Errc::parse);
  CHECK(code_of(R"({"a_n": 2.5})") == Errc::parse);

  const ProcessConfig p = process_from_json(R"({"kind": "linear_process", "ratio": 0.5})");
  CHECK(std::get<LinearProcess>(p.kind).coeffs.size() == kDefaultLinearTruncation);
}

TEST_CASE("CSV output") {
  ExperimentSpec s;
  s.process.scale = 10.0;
  s.replications = 50;
  s.n_values = {100, 200};
  s.a_n = 2;
  const TableResult t = run_experiment(s, 1);
  std::ostringstream os;
  write_csv(t, os);
  std::istringstream in(os.str());
  std::string line;
  std::vector<std::string> data;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      if (line.rfind("# experiment: ", 0) == 0) {
        const auto echo = experiment_from_json(line.substr(14));
        CHECK(experiment_to_json(echo) == experiment_to_json(s));
      }
      continue;
    }
    if (!saw_header) {
      CHECK(line == "n,freq,mean_stat,nonpos_lrv");
      saw_header = true;
      continue;
    }
    data.push_back(line);
  }
  REQUIRE(data.size() == 2);
  CHECK(data[0].rfind("100,", 0) == 0);
  const double freq = std::stod(data[0].substr(4, data[0].find(',', 4) - 4));
  CHECK(freq == t.rows[0].rejection_frequency);
}

TEST_CASE("doubles are written with round-trip precision") {
  for (double v : {0.1, 1.0 / 3.0, 2.0 / 7.0 * 1e-300, 123456789.123456789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  FitResult f;
  f.beta_hat = Vector{{1.0 / 3.0}};
  f.residuals = Vector{{0.1, -0.1}};
  f.rss = 0.02;
  f.col_norms = Vector{{std::sqrt(2.0)}};
  const json j = json::parse(fit_to_json(f));
  CHECK(j["beta_hat"][0].get<double>() == 1.0 / 3.0);
  CHECK(j["col_norms"][0].get<double>() == std::sqrt(2.0));
}
