#include "depreg/serialize.hpp"

#include "depreg/errors.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <ostream>
#include <set>

namespace depreg {

using nlohmann::json;

namespace {

json to_array(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_array(m.row(r).transpose()));
  return rows;
}

template <typename E, std::size_t N>
E parse_enum(const json& j, const char* field,
             const std::array<std::pair<const char*, E>, N>& table) {
  const auto s = j.get<std::string>();
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  throw Error(Errc::parse, std::string("unknown value '") + s + "' for " + field);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const char* where) {
  if (!j.is_object()) throw Error(Errc::parse, std::string(where) + " must be an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw Error(Errc::parse, "unknown field '" + item.key() + "' in " + where);
    }
  }
}

constexpr std::array kDesignKinds{
    std::pair{"intercept_linear", DesignKind::intercept_linear},
    std::pair{"intercept_quadratic", DesignKind::intercept_quadratic},
    std::pair{"intercept_sqrt_log", DesignKind::intercept_sqrt_log}};
constexpr std::array kStatistics{
    std::pair{"classic", StatisticKind::classic},
    std::pair{"truncated", StatisticKind::corrected_truncated},
    std::pair{"kernel", StatisticKind::corrected_kernel}};
constexpr std::array kReferences{std::pair{"chi2", Reference::chi2_over_dof},
                                 std::pair{"fisher", Reference::fisher}};
constexpr std::array kInnovations{std::pair{"gaussian", Innovation::gaussian},
                                  std::pair{"rademacher", Innovation::rademacher},
                                  std::pair{"uniform", Innovation::uniform}};
constexpr std::array kPostMaps{std::pair{"identity", PostMap::identity},
                               std::pair{"abs", PostMap::abs},
                               std::pair{"squared", PostMap::squared}};

// Non-negative integers only; nlohmann would otherwise wrap -1 silently.
std::uint64_t count(const json& j, const char* field) {
  if (!j.is_number_unsigned()) {
    throw Error(Errc::parse, std::string(field) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::uint64_t count_or(const json& j, const char* field, std::uint64_t fallback) {
  return j.contains(field) ? count(j.at(field), field) : fallback;
}

std::vector<std::size_t> count_list(const json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::parse, std::string(field) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) out.push_back(count(v, field));
  return out;
}

template <typename E, std::size_t N>
const char* enum_name(E value, const std::array<std::pair<const char*, E>, N>& table) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

ProcessConfig process_from(const json& j) {
  reject_unknown(j,
                 {"kind", "gamma", "coeffs", "ratio", "truncation", "innovation",
                  "post_map", "scale", "burn_in", "seed"},
                 "process");
  ProcessConfig cfg;
  const std::string kind = j.value("kind", std::string("ar1_nonmixing"));
  if (kind == "ar1_nonmixing" || kind == "ar1") {
    cfg.kind = Ar1Nonmixing{};
  } else if (kind == "intermittent") {
    cfg.kind = Intermittent{j.value("gamma", 0.25)};
  } else if (kind == "linear_process" || kind == "linear") {
    LinearProcess lp;
    if (j.contains("coeffs")) {
      lp.coeffs = j.at("coeffs").get<std::vector<double>>();
    } else if (j.contains("ratio")) {
      lp.coeffs = geometric_coefficients(
          j.at("ratio").get<double>(),
          count_or(j, "truncation", kDefaultLinearTruncation));
    } else {
      lp.coeffs = {1.0};
    }
    if (j.contains("innovation")) {
      lp.innovation = parse_enum(j.at("innovation"), "innovation", kInnovations);
    }
    if (j.contains("post_map")) {
      lp.post_map = parse_enum(j.at("post_map"), "post_map", kPostMaps);
    }
    cfg.kind = std::move(lp);
  } else {
    throw Error(Errc::parse, "unknown process kind '" + kind + "'");
  }
  cfg.scale = j.value("scale", 1.0);
  if (j.contains("burn_in") && !j.at("burn_in").is_null()) {
    cfg.burn_in = count(j.at("burn_in"), "burn_in");
  }
  cfg.seed = count_or(j, "seed", 0);
  return cfg;
}

json process_to(const ProcessConfig& cfg) {
  json j;
  if (std::holds_alternative<Ar1Nonmixing>(cfg.kind)) {
    j["kind"] = "ar1_nonmixing";
  } else if (const auto* im = std::get_if<Intermittent>(&cfg.kind)) {
    j["kind"] = "intermittent";
    j["gamma"] = im->gamma;
  } else {
    const auto& lp = std::get<LinearProcess>(cfg.kind);
    j["kind"] = "linear_process";
    j["coeffs"] = lp.coeffs;
    j["innovation"] = enum_name(lp.innovation, kInnovations);
    j["post_map"] = enum_name(lp.post_map, kPostMaps);
  }
  j["scale"] = cfg.scale;
  j["burn_in"] = effective_burn_in(cfg);
  j["seed"] = cfg.seed;
  return j;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
}

json test_result_json(const TestResult& t) {
  const char* method = t.method == TestMethod::classic_F ? "classic_F"
                       : t.method == TestMethod::corrected_kernel
                           ? "corrected_kernel"
                           : "corrected_truncated";
  return json{{"statistic", t.statistic},
              {"numerator_dof", t.numerator_dof},
              {"method", method},
              {"p_value", t.p_value},
              {"reference", t.reference == Reference::fisher ? "fisher" : "chi2_over_dof"}};
}

}  // namespace

ProcessConfig process_from_json(const std::string& text) {
  return guarded([&] { return process_from(parse_document(text)); });
}

std::string process_to_json(const ProcessConfig& config) {
  return process_to(config).dump();
}

ExperimentSpec experiment_from_json(const std::string& text) {
  return guarded([&] {
    const json j = parse_document(text);
    reject_unknown(j,
                   {"design_kind", "beta", "process", "n_values", "method", "a_n",
                    "bandwidth", "delta", "symmetrized", "null_cols", "replications",
                    "alpha", "master_seed", "reference"},
                   "experiment");
    ExperimentSpec spec;
    if (j.contains("design_kind")) {
      spec.design_kind = parse_enum(j.at("design_kind"), "design_kind", kDesignKinds);
    }
    spec.beta = j.contains("beta") ? j.at("beta").get<std::vector<double>>()
                                   : std::vector<double>(design_columns(spec.design_kind), 0.0);
    if (!j.contains("beta")) spec.beta[0] = 3.0;
    if (j.contains("process")) spec.process = process_from(j.at("process"));
    if (j.contains("n_values")) spec.n_values = count_list(j.at("n_values"), "n_values");
    if (j.contains("method")) spec.statistic = parse_enum(j.at("method"), "method", kStatistics);
    spec.a_n = count_or(j, "a_n", 0);
    if (j.contains("bandwidth") && !j.at("bandwidth").is_null()) {
      spec.bandwidth = count(j.at("bandwidth"), "bandwidth");
    }
    spec.delta = j.value("delta", 2.0);
    spec.symmetrized = j.value("symmetrized", true);
    if (j.contains("null_cols")) {
      spec.null_cols = count_list(j.at("null_cols"), "null_cols");
    } else {
      spec.null_cols.clear();
      for (std::size_t c = 1; c < spec.beta.size(); ++c) spec.null_cols.push_back(c);
    }
    spec.replications = count_or(j, "replications", 2000);
    spec.alpha = j.value("alpha", 0.05);
    spec.master_seed = count_or(j, "master_seed", 0);
    if (j.contains("reference")) {
      spec.reference = parse_enum(j.at("reference"), "reference", kReferences);
    }
    validate(spec);
    return spec;
  });
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  json j{{"design_kind", to_string(spec.design_kind)},
         {"beta", spec.beta},
         {"process", process_to(spec.process)},
         {"n_values", spec.n_values},
         {"method", to_string(spec.statistic)},
         {"a_n", spec.a_n},
         {"delta", spec.delta},
         {"symmetrized", spec.symmetrized},
         {"null_cols", spec.null_cols},
         {"replications", spec.replications},
         {"alpha", spec.alpha},
         {"master_seed", spec.master_seed},
         {"reference", enum_name(spec.reference, kReferences)}};
  j["bandwidth"] = spec.bandwidth ? json(*spec.bandwidth) : json(nullptr);
  return j.dump();
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_csv(const TableResult& table, std::ostream& out) {
  out << "# experiment: " << experiment_to_json(table.spec) << '\n';
  if (table.spec.statistic == StatisticKind::corrected_truncated) {
    out << "# alternate convention (symmetrized="
        << (table.spec.symmetrized ? "false" : "true") << ") freq:";
    for (const auto& row : table.rows) {
      out << ' ' << row.n << '=' << format_double(row.alternate_frequency.value_or(0.0));
    }
    out << '\n';
  }
  out << "n,freq,mean_stat,nonpos_lrv\n";
  for (const auto& row : table.rows) {
    out << row.n << ',' << format_double(row.rejection_frequency) << ','
        << format_double(row.mean_statistic) << ',' << row.nonpositive_lrv_count
        << '\n';
  }
}

std::string fit_to_json(const FitResult& fit) {
  return json{{"beta_hat", to_array(fit.beta_hat)},
              {"residuals", to_array(fit.residuals)},
              {"rss", fit.rss},
              {"col_norms", to_array(fit.col_norms)}}
      .dump();
}

std::string regularity_to_json(const RegularityReport& report) {
  json lags = json::array();
  for (const auto& l : report.lags) {
    lags.push_back({{"lag", l.lag},
                    {"max_abs_deviation", l.max_abs_deviation},
                    {"regular", l.regular}});
  }
  return json{{"n", report.n},
              {"p", report.p},
              {"tolerance", report.tolerance},
              {"col_norms", to_array(report.col_norms)},
              {"lindeberg", to_array(report.lindeberg)},
              {"r0_hat", to_rows(report.r0_hat)},
              {"lags", lags},
              {"min_eigenvalue", report.min_eigenvalue},
              {"max_eigenvalue", report.max_eigenvalue},
              {"r0_positive_definite", report.r0_positive_definite},
              {"regular", report.regular}}
      .dump();
}

std::string nested_test_to_json(const NestedTest& test) {
  json lrv{{"value", test.lrv.value}, {"nonpositive", test.lrv.nonpositive}};
  if (const auto* k = std::get_if<KernelF0>(&test.lrv.method)) {
    lrv["method"] = "kernel_f0";
    lrv["bandwidth"] = k->bandwidth;
  } else {
    const auto& t = std::get<Truncated>(test.lrv.method);
    lrv["method"] = "truncated";
    lrv["a_n"] = t.a_n;
    lrv["symmetrized"] = t.symmetrized;
  }
  return json{{"n", test.full.residuals.size()},
              {"p", test.full.beta_hat.size()},
              {"p0", test.p0},
              {"beta_hat", to_array(test.full.beta_hat)},
              {"rss", test.full.rss},
              {"rss0", test.rss_null},
              {"lrv", lrv},
              {"classic", test_result_json(test.classic)},
              {"corrected", test_result_json(test.corrected)}}
      .dump();
}

}  // namespace depreg
