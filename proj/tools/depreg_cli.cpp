// depreg command-line tool. Links only the C interface of libdepreg.
//
//   depreg simulate --kind ar1 --n 1000 --seed 7
//   depreg table    --config configs/example1_model1.json
//   depreg fit|test|acf|diagnose --config ... [--data file.csv]
//
// Exit status: 0 success, 1 usage or input error, 2 numerical failure
// (rank-deficient design, noiseless fit, nonpositive long-run variance).

#include "depreg/depreg.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Failure {
  int exit_code;
  std::string message;
};

void check(depreg_status status) {
  if (status == DEPREG_OK) return;
  throw Failure{depreg_status_is_numerical(status) ? kExitNumerical : kExitUsage,
                std::string(depreg_status_string(status)) + ": " + depreg_last_error()};
}

struct DesignDeleter {
  void operator()(depreg_design* d) const { depreg_design_destroy(d); }
};
struct FitDeleter {
  void operator()(depreg_fit* f) const { depreg_fit_destroy(f); }
};
struct ExperimentDeleter {
  void operator()(depreg_experiment* e) const { depreg_experiment_destroy(e); }
};
struct TableDeleter {
  void operator()(depreg_table* t) const { depreg_table_destroy(t); }
};
struct StringDeleter {
  void operator()(char* s) const { depreg_string_free(s); }
};

using DesignPtr = std::unique_ptr<depreg_design, DesignDeleter>;
using FitPtr = std::unique_ptr<depreg_fit, FitDeleter>;
using ExperimentPtr = std::unique_ptr<depreg_experiment, ExperimentDeleter>;
using TablePtr = std::unique_ptr<depreg_table, TableDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

std::string take(char* s) { return std::string(OwnedString(s).get()); }

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Failure{kExitUsage, where + ": " + e.what()};
  }
}

// ---- config overrides ------------------------------------------------------

enum class Kind { string, number, integer, boolean, number_list, integer_list };

struct Override {
  const char* flag;     // dotted leaf name, e.g. "process.gamma"
  Kind kind;
  const char* help;
  std::string value{};  // raw flag text when given
};

json convert(const std::string& raw, Kind kind, const std::string& flag) {
  try {
    switch (kind) {
      case Kind::string:
        return raw;
      case Kind::boolean:
        if (raw == "true" || raw == "1") return true;
        if (raw == "false" || raw == "0") return false;
        break;
      case Kind::number:
      case Kind::integer: {
        json v = json::parse(raw);
        if (kind == Kind::integer ? v.is_number_unsigned() : v.is_number()) return v;
        break;
      }
      case Kind::number_list:
      case Kind::integer_list: {
        json v = json::parse("[" + raw + "]");
        for (const auto& e : v) {
          if (kind == Kind::integer_list ? !e.is_number_unsigned() : !e.is_number()) {
            throw Failure{kExitUsage, "--" + flag + ": bad list entry"};
          }
        }
        return v;
      }
    }
  } catch (const json::exception&) {
  }
  throw Failure{kExitUsage, "--" + flag + ": cannot parse '" + raw + "'"};
}

void set_dotted(json& doc, const std::string& dotted, json value) {
  std::string pointer = "/";
  for (char c : dotted) pointer += (c == '.') ? '/' : c;
  doc[json::json_pointer(pointer)] = std::move(value);
}

std::vector<Override> experiment_overrides() {
  return {
      {"design_kind", Kind::string,
       "intercept_linear | intercept_quadratic | intercept_sqrt_log"},
      {"beta", Kind::number_list, "true coefficients, comma separated"},
      {"process.kind", Kind::string, "ar1_nonmixing | intermittent | linear_process"},
      {"process.gamma", Kind::number, "intermittent map exponent in (0, 1/2)"},
      {"process.coeffs", Kind::number_list, "linear process coefficients"},
      {"process.ratio", Kind::number, "geometric linear process coefficients"},
      {"process.truncation", Kind::integer, "number of geometric coefficients"},
      {"process.innovation", Kind::string, "gaussian | rademacher | uniform"},
      {"process.post_map", Kind::string, "identity | abs | squared"},
      {"process.scale", Kind::number, "error multiplier"},
      {"process.burn_in", Kind::integer, "discarded initial iterations"},
      {"n_values", Kind::integer_list, "sample sizes, comma separated"},
      {"method", Kind::string, "truncated | kernel | classic"},
      {"a_n", Kind::integer, "number of autocovariance lags (truncated)"},
      {"bandwidth", Kind::integer, "kernel bandwidth c_n (default n^0.45)"},
      {"delta", Kind::number, "moment margin for the default bandwidth"},
      {"symmetrized", Kind::boolean, "gamma_0 + 2 sum gamma_k (true) or one-sided"},
      {"null_cols", Kind::integer_list, "tested coefficients (0-based)"},
      {"replications", Kind::integer, "Monte Carlo replications N"},
      {"alpha", Kind::number, "nominal level"},
      {"master_seed", Kind::integer, "master seed"},
      {"reference", Kind::string, "chi2 | fisher (classic statistic)"},
  };
}

// Dotted flags also answer to their leaf name (--process.gamma, --gamma);
// alias_prefix adds the dotted form to undotted flags.
void add_overrides(CLI::App* cmd, std::vector<Override>& overrides,
                   const std::string& alias_prefix = "") {
  for (auto& o : overrides) {
    const std::string flag = o.flag;
    std::string names = "--" + flag;
    if (flag.find('.') != std::string::npos) {
      names += ",--" + flag.substr(flag.find('.') + 1);
    } else if (!alias_prefix.empty()) {
      names += ",--" + alias_prefix + flag;
    }
    cmd->add_option(names, o.value, o.help);
  }
}

json apply_overrides(json doc, const std::vector<Override>& overrides) {
  for (const auto& o : overrides) {
    if (!o.value.empty()) set_dotted(doc, o.flag, convert(o.value, o.kind, o.flag));
  }
  return doc;
}

// ---- output ----------------------------------------------------------------

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Failure{kExitUsage, "cannot write '" + path + "'"};
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void log_config(const std::string& subcommand, const json& config) {
  std::cerr << "depreg " << subcommand << ": " << config.dump() << '\n';
}

// ---- data sources ----------------------------------------------------------

struct Dataset {
  DesignPtr design;
  std::vector<double> y;
  json source;
};

// CSV with a header row; first column y, remaining columns the design. With
// only a y column the design comes from design_kind.
Dataset read_dataset(const std::string& path, const std::string& design_kind) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot open '" + path + "'"};
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const char* b = cell.data();
      while (b < cell.data() + cell.size() && *b == ' ') ++b;
      const auto res = std::from_chars(b, cell.data() + cell.size(), v);
      if (res.ec != std::errc()) {
        throw Failure{kExitUsage, path + ": bad number '" + cell + "'"};
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Failure{kExitUsage, path + ": ragged rows"};
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Failure{kExitUsage, path + ": no data rows"};
  const std::size_t n = rows.size();
  const std::size_t width = rows.front().size();
  Dataset d;
  d.source = {{"data", path}, {"n", n}};
  for (const auto& r : rows) d.y.push_back(r[0]);
  depreg_design* raw = nullptr;
  if (width > 1) {
    std::vector<double> cols(n * (width - 1));
    for (std::size_t j = 1; j < width; ++j) {
      for (std::size_t i = 0; i < n; ++i) cols[(j - 1) * n + i] = rows[i][j];
    }
    check(depreg_design_create(n, width - 1, cols.data(), &raw));
  } else {
    check(depreg_design_build(design_kind.c_str(), n, &raw));
    d.source["design_kind"] = design_kind;
  }
  d.design.reset(raw);
  return d;
}

Dataset simulate_dataset(const depreg_experiment* exp, std::size_t n,
                         std::size_t replication) {
  Dataset d;
  d.y.resize(n);
  depreg_design* raw = nullptr;
  check(depreg_experiment_sample(exp, n, replication, &raw, d.y.data()));
  d.design.reset(raw);
  d.source = {{"n", n}, {"replication", replication}};
  return d;
}

struct ExperimentArgs {
  std::string config_path;
  std::string output;
  std::string data;
  std::size_t n = 0;
  std::size_t replication = 0;
  std::vector<Override> overrides = experiment_overrides();
};

void add_experiment_args(CLI::App* cmd, ExperimentArgs& args, bool single_sample) {
  cmd->add_option("-c,--config", args.config_path, "experiment config (JSON)");
  cmd->add_option("-o,--output", args.output, "output file (default stdout)");
  if (single_sample) {
    cmd->add_option("--data", args.data, "CSV file: y first, then design columns");
    cmd->add_option("--n", args.n, "sample size (default: first of n_values)");
    cmd->add_option("--replication", args.replication, "replication index");
  }
  add_overrides(cmd, args.overrides);
}

struct LoadedExperiment {
  ExperimentPtr handle;
  json resolved;
};

LoadedExperiment load_experiment(const ExperimentArgs& args) {
  json doc = args.config_path.empty()
                 ? json::object()
                 : parse_json(read_file(args.config_path), args.config_path);
  doc = apply_overrides(std::move(doc), args.overrides);
  depreg_experiment* raw = nullptr;
  check(depreg_experiment_from_json(doc.dump().c_str(), &raw));
  LoadedExperiment out;
  out.handle.reset(raw);
  char* echo = nullptr;
  check(depreg_experiment_json(raw, &echo));
  out.resolved = json::parse(take(echo));
  return out;
}

Dataset load_dataset(const ExperimentArgs& args, const LoadedExperiment& exp) {
  if (!args.data.empty()) {
    return read_dataset(args.data, exp.resolved.at("design_kind").get<std::string>());
  }
  const std::size_t n =
      args.n ? args.n : exp.resolved.at("n_values").at(0).get<std::size_t>();
  return simulate_dataset(exp.handle.get(), n, args.replication);
}

// ---- subcommands -------------------------------------------------------------

struct SimulateArgs {
  std::string config_path;
  std::string output;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<Override> overrides = {
      {"kind", Kind::string, "ar1 | intermittent | linear"},
      {"gamma", Kind::number, "intermittent map exponent in (0, 1/2)"},
      {"coeffs", Kind::number_list, "linear process coefficients"},
      {"ratio", Kind::number, "geometric linear process coefficients"},
      {"truncation", Kind::integer, "number of geometric coefficients"},
      {"innovation", Kind::string, "gaussian | rademacher | uniform"},
      {"post_map", Kind::string, "identity | abs | squared"},
      {"scale", Kind::number, "multiplier"},
      {"burn_in", Kind::integer, "discarded initial iterations"},
  };
};

int run_simulate(const SimulateArgs& args) {
  json doc = args.config_path.empty()
                 ? json::object()
                 : parse_json(read_file(args.config_path), args.config_path);
  if (doc.contains("process")) doc = doc.at("process");
  doc = apply_overrides(std::move(doc), args.overrides);
  if (doc.contains("kind") && doc["kind"] == "ar1") doc["kind"] = "ar1_nonmixing";
  if (doc.contains("kind") && doc["kind"] == "linear") doc["kind"] = "linear_process";
  doc.erase("seed");
  std::vector<double> series(args.n);
  check(depreg_simulate(doc.dump().c_str(), args.n, args.seed, series.data()));
  json resolved = doc;
  resolved["n"] = args.n;
  resolved["seed"] = args.seed;
  log_config("simulate", resolved);
  Output out(args.output);
  auto& os = out.stream();
  os << "# simulate: " << resolved.dump() << '\n' << "i,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    os << i + 1 << ',' << format_double(series[i]) << '\n';
  }
  return 0;
}

int run_table(const ExperimentArgs& args, unsigned threads) {
  const auto exp = load_experiment(args);
  log_config("table", exp.resolved);
  depreg_table* raw = nullptr;
  check(depreg_experiment_run(exp.handle.get(), threads, &raw));
  TablePtr table(raw);
  char* csv = nullptr;
  check(depreg_table_csv(table.get(), &csv));
  Output out(args.output);
  out.stream() << take(csv);
  return 0;
}

int run_fit(const ExperimentArgs& args) {
  const auto exp = load_experiment(args);
  Dataset d = load_dataset(args, exp);
  depreg_fit* raw = nullptr;
  check(depreg_fit_create(d.design.get(), d.y.data(), d.y.size(), &raw));
  FitPtr fit(raw);
  char* text = nullptr;
  check(depreg_fit_json(fit.get(), &text));
  json doc = json::parse(take(text));
  doc["config"] = {{"experiment", exp.resolved}, {"sample", d.source}};
  log_config("fit", doc["config"]);
  Output out(args.output);
  out.stream() << doc.dump() << '\n';
  return 0;
}

int run_test(const ExperimentArgs& args) {
  const auto exp = load_experiment(args);
  Dataset d = load_dataset(args, exp);
  const auto& r = exp.resolved;
  const std::string method = r.at("method");
  depreg_lrv_method lrv_method = DEPREG_LRV_TRUNCATED;
  std::size_t bandwidth = r.at("a_n");
  if (method == "kernel") {
    lrv_method = DEPREG_LRV_KERNEL_F0;
    if (r.at("bandwidth").is_null()) {
      check(depreg_default_bandwidth(d.y.size(), r.at("delta").get<double>(), &bandwidth));
    } else {
      bandwidth = r.at("bandwidth");
    }
  }
  const auto tested = r.at("null_cols").get<std::vector<std::size_t>>();
  const depreg_reference reference =
      r.at("reference") == "fisher" ? DEPREG_REF_FISHER : DEPREG_REF_CHI2_OVER_DOF;
  char* text = nullptr;
  check(depreg_nested_test_json(d.design.get(), tested.data(), tested.size(),
                                d.y.data(), d.y.size(), lrv_method, bandwidth,
                                r.at("symmetrized").get<bool>() ? 1 : 0, reference,
                                &text));
  json doc = json::parse(take(text));
  doc["alpha"] = r.at("alpha");
  doc["reject_classic"] = doc["classic"]["p_value"].get<double>() < r.at("alpha").get<double>();
  doc["reject_corrected"] =
      doc["corrected"]["p_value"].get<double>() < r.at("alpha").get<double>();
  doc["config"] = {{"experiment", r}, {"sample", d.source}};
  log_config("test", doc["config"]);
  Output out(args.output);
  out.stream() << doc.dump() << '\n';
  return 0;
}

int run_acf(const ExperimentArgs& args, std::size_t max_lag, bool raw_series) {
  const auto exp = load_experiment(args);
  Dataset d = load_dataset(args, exp);
  std::vector<double> series = d.y;
  if (!raw_series) {
    depreg_fit* raw = nullptr;
    check(depreg_fit_create(d.design.get(), d.y.data(), d.y.size(), &raw));
    FitPtr fit(raw);
    series.assign(depreg_fit_residuals(fit.get()),
                  depreg_fit_residuals(fit.get()) + d.y.size());
  }
  std::vector<double> values(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    check(depreg_autocov(series.data(), series.size(), static_cast<long>(k), &values[k]));
  }
  json config = {{"experiment", exp.resolved},
                 {"sample", d.source},
                 {"max_lag", max_lag},
                 {"source", raw_series ? "raw_series" : "residuals"}};
  log_config("acf", config);
  Output out(args.output);
  auto& os = out.stream();
  os << "# acf: " << config.dump() << '\n' << "lag,value\n";
  for (std::size_t k = 0; k <= max_lag; ++k) {
    os << k << ',' << format_double(values[k]) << '\n';
  }
  return 0;
}

int run_diagnose(const ExperimentArgs& args, std::vector<std::size_t> lags, double tol) {
  const auto exp = load_experiment(args);
  DesignPtr design;
  json source;
  if (!args.data.empty()) {
    Dataset d = read_dataset(args.data, exp.resolved.at("design_kind").get<std::string>());
    design = std::move(d.design);
    source = d.source;
  } else {
    const std::size_t n =
        args.n ? args.n : exp.resolved.at("n_values").at(0).get<std::size_t>();
    const std::string kind = exp.resolved.at("design_kind");
    depreg_design* raw = nullptr;
    check(depreg_design_build(kind.c_str(), n, &raw));
    design.reset(raw);
    source = {{"design_kind", kind}, {"n", n}};
  }
  if (lags.empty()) lags = {0, 1, 2, 3, 4, 5};
  char* text = nullptr;
  check(depreg_design_regularity_json(design.get(), lags.data(), lags.size(), tol, &text));
  json doc = json::parse(take(text));
  doc["config"] = {{"design", source}, {"lags", lags}, {"tol", tol}};
  log_config("diagnose", doc["config"]);
  Output out(args.output);
  out.stream() << doc.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares inference with short-range dependent errors"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(depreg_version()));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate an error process (CSV)");
  simulate->add_option("-c,--config", sim.config_path, "process or experiment config");
  simulate->add_option("-o,--output", sim.output, "output file (default stdout)");
  simulate->add_option("--n", sim.n, "series length")->required();
  simulate->add_option("--seed", sim.seed, "seed");
  add_overrides(simulate, sim.overrides, "process.");

  ExperimentArgs table_args;
  unsigned threads = 0;
  auto* table = app.add_subcommand("table", "Monte Carlo level/power table (CSV)");
  add_experiment_args(table, table_args, false);
  table->add_option("--threads", threads, "worker threads (default DEPREG_THREADS or all)");

  ExperimentArgs fit_args;
  auto* fit = app.add_subcommand("fit", "least-squares fit (JSON)");
  add_experiment_args(fit, fit_args, true);

  ExperimentArgs test_args;
  auto* test = app.add_subcommand("test", "classic and corrected F tests (JSON)");
  add_experiment_args(test, test_args, true);

  ExperimentArgs acf_args;
  std::size_t max_lag = 20;
  bool raw_series = false;
  auto* acf = app.add_subcommand("acf", "residual autocovariances (CSV)");
  add_experiment_args(acf, acf_args, true);
  acf->add_option("--max_lag,--max-lag", max_lag, "largest lag");
  acf->add_flag("--raw", raw_series, "use the y column as is, without fitting");

  ExperimentArgs diag_args;
  std::vector<std::size_t> lags;
  double tol = 0.01;
  auto* diagnose = app.add_subcommand("diagnose", "design regularity report (JSON)");
  add_experiment_args(diagnose, diag_args, true);
  diagnose->add_option("--lags", lags, "lags to compare against lag 0")->delimiter(',');
  diagnose->add_option("--tol", tol, "regularity tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*table) return run_table(table_args, threads);
    if (*fit) return run_fit(fit_args);
    if (*test) return run_test(test_args);
    if (*acf) return run_acf(acf_args, max_lag, raw_series);
    if (*diagnose) return run_diagnose(diag_args, lags, tol);
  } catch (const Failure& f) {
    std::cerr << "depreg: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "depreg: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
