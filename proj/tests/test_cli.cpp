#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DEPREG_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string config(const std::string& name) {
  return std::string(DEPREG_CONFIG_DIR) + "/" + name;
}

// Lines of a CSV document that are neither comments nor the header.
std::vector<std::string> data_lines(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("simulate is deterministic") {
  const Run a = run("simulate --kind ar1 --scale 10 --n 50 --seed 7");
  const Run b = run("simulate --process.kind ar1 --process.scale 10 --n 50 --seed 7");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(data_lines(a.out).size() == 50);
  CHECK(a.out.rfind("# simulate: ", 0) == 0);
  const Run c = run("simulate --kind intermittent --gamma 0.25 --n 20 --seed 7");
  CHECK(c.status == 0);
  CHECK(c.out != a.out);
  CHECK(run("simulate --kind intermittent --gamma 0.75 --n 20").status == 1);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("simulate --n 10 --bogus 3").status == 1);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("table --config /nonexistent.json").status == 1);
  CHECK(run("table --replications 10 --method sideways").status == 1);
}

TEST_CASE("table from a config with overrides") {
  const Run r = run("table --config " + config("example1_model1.json") +
                    " --replications 200 --n_values 200,400 --threads 2");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("# experiment: ", 0) == 0);
  const auto echo = json::parse(r.out.substr(14, r.out.find('\n') - 14));
  CHECK(echo["replications"] == 200);
  CHECK(echo["a_n"] == 3);
  CHECK(r.out.find("n,freq,mean_stat,nonpos_lrv") != std::string::npos);
  const auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("200,", 0) == 0);

  const Run again = run("table --config " + config("example1_model1.json") +
                        " --replications 200 --n_values 200,400 --threads 1");
  CHECK(again.out == r.out);
}

TEST_CASE("fit, test, acf and diagnose on simulated data") {
  const std::string base = "--config " + config("example1_model1.json") + " --n 300";
  const Run f = run("fit " + base);
  REQUIRE(f.status == 0);
  const json fj = json::parse(f.out);
  CHECK(fj["beta_hat"].size() == 2);
  CHECK(fj["config"]["sample"]["n"] == 300);

  const Run t = run("test " + base + " --replication 4");
  REQUIRE(t.status == 0);
  const json tj = json::parse(t.out);
  CHECK(tj["corrected"]["p_value"].get<double>() >= 0.0);
  CHECK(tj["lrv"]["a_n"] == 3);
  CHECK(tj.contains("reject_corrected"));

  const Run k = run("test " + base + " --method kernel");
  REQUIRE(k.status == 0);
  CHECK(json::parse(k.out)["lrv"]["method"] == "kernel_f0");

  const Run a = run("acf " + base + " --max_lag 6");
  REQUIRE(a.status == 0);
  CHECK(data_lines(a.out).size() == 7);

  const Run d = run("diagnose --design_kind intercept_quadratic --n 20000 --lags 0,1,10");
  REQUIRE(d.status == 0);
  const json dj = json::parse(d.out);
  CHECK(dj["regular"] == true);
  CHECK(dj["lags"].size() == 3);
}

TEST_CASE("data files and numerical failures") {
  {
    std::ofstream csv("exact_line.csv");
    csv << "y,one,t\n";
    for (int i = 1; i <= 20; ++i) csv << 2.0 + 0.5 * i << ",1," << i << '\n';
  }
  const Run t = run("test --data exact_line.csv");
  CHECK(t.status == 2);
  const Run f = run("fit --data exact_line.csv");
  REQUIRE(f.status == 0);
  CHECK(json::parse(f.out)["beta_hat"][1].get<double>() == doctest::Approx(0.5));

  {
    std::ofstream csv("y_only.csv");
    csv << "y\n";
    for (int i = 1; i <= 30; ++i) csv << (i % 3) - 1.0 + 0.01 * i << '\n';
  }
  const Run a = run("acf --data y_only.csv --raw --max_lag 2 -o acf_out.csv");
  REQUIRE(a.status == 0);
  std::ifstream in("acf_out.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(data_lines(ss.str()).size() == 3);

  {
    std::ofstream csv("collinear.csv");
    csv << "y,a,b\n";
    for (int i = 1; i <= 10; ++i) csv << i * 0.3 + (i % 2) << ',' << i << ',' << 2 * i << '\n';
  }
  CHECK(run("fit --data collinear.csv").status == 2);
}
