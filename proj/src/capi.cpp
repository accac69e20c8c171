#include "depreg/depreg.h"

#include "depreg/design.hpp"
#include "depreg/errors.hpp"
#include "depreg/inference.hpp"
#include "depreg/montecarlo.hpp"
#include "depreg/ols.hpp"
#include "depreg/processes.hpp"
#include "depreg/serialize.hpp"
#include "depreg/spectral.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

struct depreg_design {
  depreg::DesignMatrix x;
};

struct depreg_fit {
  depreg::FitResult fit;
};

struct depreg_experiment {
  depreg::ExperimentSpec spec;
};

struct depreg_table {
  depreg::TableResult table;
};

namespace {

thread_local std::string last_error;

depreg_status to_status(depreg::Errc code) {
  using depreg::Errc;
  switch (code) {
    case Errc::invalid_argument: return DEPREG_ERR_INVALID_ARGUMENT;
    case Errc::domain: return DEPREG_ERR_DOMAIN;
    case Errc::rank_deficient: return DEPREG_ERR_RANK_DEFICIENT;
    case Errc::degenerate_fit: return DEPREG_ERR_DEGENERATE_FIT;
    case Errc::nonpositive_lrv: return DEPREG_ERR_NONPOSITIVE_LRV;
    case Errc::parse: return DEPREG_ERR_PARSE;
    case Errc::io: return DEPREG_ERR_IO;
  }
  return DEPREG_ERR_INTERNAL;
}

template <typename F>
depreg_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return DEPREG_OK;
  } catch (const depreg::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DEPREG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DEPREG_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw depreg::Error(depreg::Errc::invalid_argument, what);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::span<const double> view(const double* p, std::size_t n) {
  require(p != nullptr || n == 0, "null data pointer");
  return {p, n};
}

depreg::Vector to_vector(const double* p, std::size_t n) {
  require(p != nullptr || n == 0, "null data pointer");
  return Eigen::Map<const depreg::Vector>(p, static_cast<Eigen::Index>(n));
}

std::vector<std::size_t> to_indices(const std::size_t* p, std::size_t n) {
  require(p != nullptr || n == 0, "null index pointer");
  return {p, p + n};
}

void copy_out(const depreg::Matrix& m, double* out) {
  require(out != nullptr, "null output pointer");
  Eigen::Map<depreg::Matrix>(out, m.rows(), m.cols()) = m;
}

void copy_out(const depreg::Vector& v, double* out) {
  require(out != nullptr, "null output pointer");
  Eigen::Map<depreg::Vector>(out, v.size()) = v;
}

depreg::LrvMethod to_method(depreg_lrv_method method, std::size_t bandwidth,
                            int symmetrized) {
  if (method == DEPREG_LRV_KERNEL_F0) return depreg::KernelF0{bandwidth};
  require(method == DEPREG_LRV_TRUNCATED, "unknown LRV method");
  return depreg::Truncated{bandwidth, symmetrized != 0};
}

depreg_lrv to_c(const depreg::LrvEstimate& e) {
  depreg_lrv out{};
  out.value = e.value;
  out.bandwidth = e.bandwidth();
  out.nonpositive = e.nonpositive ? 1 : 0;
  if (const auto* t = std::get_if<depreg::Truncated>(&e.method)) {
    out.method = DEPREG_LRV_TRUNCATED;
    out.symmetrized = t->symmetrized ? 1 : 0;
  } else {
    out.method = DEPREG_LRV_KERNEL_F0;
    out.symmetrized = 1;
  }
  return out;
}

depreg::LrvEstimate from_c(const depreg_lrv& c) {
  depreg::LrvEstimate e;
  e.value = c.value;
  e.method = to_method(c.method, c.bandwidth, c.symmetrized);
  e.nonpositive = c.nonpositive != 0 || !(c.value > 0.0);
  return e;
}

depreg_test_result to_c(const depreg::TestResult& t) {
  depreg_test_result out{};
  out.statistic = t.statistic;
  out.numerator_dof = t.numerator_dof;
  out.p_value = t.p_value;
  out.method = t.method == depreg::TestMethod::classic_F ? DEPREG_TEST_CLASSIC_F
               : t.method == depreg::TestMethod::corrected_kernel
                   ? DEPREG_TEST_CORRECTED_KERNEL
                   : DEPREG_TEST_CORRECTED_TRUNCATED;
  out.reference = t.reference == depreg::Reference::fisher ? DEPREG_REF_FISHER
                                                           : DEPREG_REF_CHI2_OVER_DOF;
  return out;
}

depreg::Reference to_reference(depreg_reference r) {
  return r == DEPREG_REF_FISHER ? depreg::Reference::fisher
                                : depreg::Reference::chi2_over_dof;
}

depreg::DesignKind parse_design_kind(const char* kind) {
  require(kind != nullptr, "null design kind");
  const std::string k(kind);
  if (k == "intercept_linear") return depreg::DesignKind::intercept_linear;
  if (k == "intercept_quadratic") return depreg::DesignKind::intercept_quadratic;
  if (k == "intercept_sqrt_log") return depreg::DesignKind::intercept_sqrt_log;
  throw depreg::Error(depreg::Errc::invalid_argument, "unknown design kind '" + k + "'");
}

}  // namespace

extern "C" {

const char* depreg_version(void) { return "0.1.0"; }

const char* depreg_status_string(depreg_status status) {
  switch (status) {
    case DEPREG_OK: return "ok";
    case DEPREG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DEPREG_ERR_DOMAIN: return "domain error";
    case DEPREG_ERR_RANK_DEFICIENT: return "rank-deficient design";
    case DEPREG_ERR_DEGENERATE_FIT: return "degenerate fit";
    case DEPREG_ERR_NONPOSITIVE_LRV: return "nonpositive long-run variance";
    case DEPREG_ERR_PARSE: return "parse error";
    case DEPREG_ERR_IO: return "I/O error";
    case DEPREG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int depreg_status_is_numerical(depreg_status status) {
  return status == DEPREG_ERR_RANK_DEFICIENT || status == DEPREG_ERR_DEGENERATE_FIT ||
         status == DEPREG_ERR_NONPOSITIVE_LRV;
}

const char* depreg_last_error(void) { return last_error.c_str(); }

void depreg_string_free(char* s) { std::free(s); }

depreg_status depreg_design_create(size_t n, size_t p, const double* col_major,
                                   depreg_design** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    require(col_major != nullptr, "null design data");
    depreg::Matrix m = Eigen::Map<const depreg::Matrix>(
        col_major, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    *out = new depreg_design{depreg::DesignMatrix(std::move(m))};
  });
}

depreg_status depreg_design_build(const char* kind, size_t n, depreg_design** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = new depreg_design{depreg::build_design(parse_design_kind(kind), n)};
  });
}

void depreg_design_destroy(depreg_design* design) { delete design; }

size_t depreg_design_rows(const depreg_design* design) {
  return design ? design->x.rows() : 0;
}

size_t depreg_design_cols(const depreg_design* design) {
  return design ? design->x.cols() : 0;
}

depreg_status depreg_design_data(const depreg_design* design, double* col_major) {
  return guard([&] {
    require(design != nullptr, "null design");
    copy_out(design->x.matrix(), col_major);
  });
}

depreg_status depreg_design_column_norms(const depreg_design* design, double* out) {
  return guard([&] {
    require(design != nullptr, "null design");
    copy_out(depreg::column_norms(design->x), out);
  });
}

depreg_status depreg_design_lindeberg(const depreg_design* design, double* out) {
  return guard([&] {
    require(design != nullptr, "null design");
    copy_out(depreg::lindeberg_ratios(design->x), out);
  });
}

depreg_status depreg_design_empirical_rho(const depreg_design* design, size_t lag,
                                          double* out) {
  return guard([&] {
    require(design != nullptr, "null design");
    copy_out(depreg::empirical_rho(design->x, lag), out);
  });
}

depreg_status depreg_design_regularity_json(const depreg_design* design,
                                            const size_t* lags, size_t n_lags,
                                            double tol, char** json_out) {
  return guard([&] {
    require(design != nullptr && json_out != nullptr, "null argument");
    const auto report =
        depreg::regularity_report(design->x, to_indices(lags, n_lags), tol);
    *json_out = duplicate(depreg::regularity_to_json(report));
  });
}

depreg_status depreg_rho_regularly_varying(double alpha_j, double alpha_l,
                                           double* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = depreg::rho_regularly_varying(alpha_j, alpha_l);
  });
}

depreg_status depreg_r0_from_alphas(const double* alphas, size_t p, double* out,
                                    int* positive_definite) {
  return guard([&] {
    require(alphas != nullptr, "null exponents");
    const auto r0 = depreg::r0_from_alphas(std::vector<double>(alphas, alphas + p));
    copy_out(r0.r0, out);
    if (positive_definite) *positive_definite = r0.positive_definite ? 1 : 0;
  });
}

depreg_status depreg_fit_create(const depreg_design* design, const double* y,
                                size_t n, depreg_fit** out) {
  return guard([&] {
    require(design != nullptr && out != nullptr, "null argument");
    *out = new depreg_fit{depreg::fit(design->x, to_vector(y, n))};
  });
}

void depreg_fit_destroy(depreg_fit* fit) { delete fit; }

size_t depreg_fit_n(const depreg_fit* fit) {
  return fit ? static_cast<size_t>(fit->fit.residuals.size()) : 0;
}

size_t depreg_fit_p(const depreg_fit* fit) {
  return fit ? static_cast<size_t>(fit->fit.beta_hat.size()) : 0;
}

const double* depreg_fit_beta(const depreg_fit* fit) {
  return fit ? fit->fit.beta_hat.data() : nullptr;
}

const double* depreg_fit_residuals(const depreg_fit* fit) {
  return fit ? fit->fit.residuals.data() : nullptr;
}

const double* depreg_fit_col_norms(const depreg_fit* fit) {
  return fit ? fit->fit.col_norms.data() : nullptr;
}

double depreg_fit_rss(const depreg_fit* fit) { return fit ? fit->fit.rss : 0.0; }

depreg_status depreg_fit_json(const depreg_fit* fit, char** json_out) {
  return guard([&] {
    require(fit != nullptr && json_out != nullptr, "null argument");
    *json_out = duplicate(depreg::fit_to_json(fit->fit));
  });
}

depreg_status depreg_nested_rss(const depreg_design* design, const size_t* tested,
                                size_t n_tested, const double* y, size_t n,
                                int allow_zero_model, double* rss_full,
                                double* rss_null) {
  return guard([&] {
    require(design != nullptr && rss_full != nullptr && rss_null != nullptr,
            "null argument");
    const auto r = depreg::nested_rss(design->x, to_indices(tested, n_tested),
                                      to_vector(y, n), allow_zero_model != 0);
    *rss_full = r.rss_full;
    *rss_null = r.rss_null;
  });
}

double depreg_kernel(double x) { return depreg::kernel_K(x); }

depreg_status depreg_autocov(const double* series, size_t n, long lag, double* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = depreg::autocov(view(series, n), lag);
  });
}

depreg_status depreg_spectral_density(const double* residuals, size_t n,
                                      size_t bandwidth, const double* lambdas,
                                      size_t n_lambdas, double* out) {
  return guard([&] {
    require(out != nullptr || n_lambdas == 0, "null output pointer");
    const auto f =
        depreg::spectral_density(view(residuals, n), bandwidth, view(lambdas, n_lambdas));
    std::copy(f.begin(), f.end(), out);
  });
}

depreg_status depreg_lrv_estimate(const double* residuals, size_t n,
                                  depreg_lrv_method method, size_t bandwidth,
                                  int symmetrized, depreg_lrv* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = to_c(depreg::lrv(view(residuals, n), to_method(method, bandwidth, symmetrized)));
  });
}

depreg_status depreg_default_bandwidth(size_t n, double delta, size_t* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = depreg::default_bandwidth(n, delta);
  });
}

depreg_status depreg_chi2_sf(double x, int dof, double* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = depreg::chi2_sf(x, dof);
  });
}

depreg_status depreg_fisher_classic(double rss0, double rss, size_t n, size_t p,
                                    size_t p0, depreg_reference reference,
                                    depreg_test_result* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = to_c(depreg::fisher_classic(rss0, rss, n, p, p0, to_reference(reference)));
  });
}

depreg_status depreg_fisher_corrected(double rss0, double rss, const depreg_lrv* lrv,
                                      size_t p, size_t p0, depreg_test_result* out) {
  return guard([&] {
    require(lrv != nullptr && out != nullptr, "null argument");
    *out = to_c(depreg::fisher_corrected(rss0, rss, from_c(*lrv), p, p0));
  });
}

depreg_status depreg_studentize(const depreg_fit* fit, const double* r0,
                                const depreg_lrv* lrv, const double* beta0,
                                double* out) {
  return guard([&] {
    require(fit != nullptr && r0 != nullptr && lrv != nullptr, "null argument");
    const auto p = fit->fit.beta_hat.size();
    const depreg::Matrix r0m = Eigen::Map<const depreg::Matrix>(r0, p, p);
    copy_out(depreg::studentize(fit->fit, r0m, from_c(*lrv),
                                to_vector(beta0, static_cast<std::size_t>(p))),
             out);
  });
}

depreg_status depreg_nested_test_json(const depreg_design* design,
                                      const size_t* tested, size_t n_tested,
                                      const double* y, size_t n,
                                      depreg_lrv_method method, size_t bandwidth,
                                      int symmetrized,
                                      depreg_reference classic_reference,
                                      char** json_out) {
  return guard([&] {
    require(design != nullptr && json_out != nullptr, "null argument");
    const auto t = depreg::nested_test(design->x, to_indices(tested, n_tested),
                                       to_vector(y, n),
                                       to_method(method, bandwidth, symmetrized),
                                       to_reference(classic_reference));
    *json_out = duplicate(depreg::nested_test_to_json(t));
  });
}

depreg_status depreg_theta_gamma(double x, double gamma, double* out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = depreg::theta_gamma(x, gamma);
  });
}

depreg_status depreg_simulate(const char* process_json, size_t n, uint64_t seed,
                              double* out) {
  return guard([&] {
    require(process_json != nullptr, "null process config");
    require(out != nullptr || n == 0, "null output pointer");
    const auto cfg = depreg::process_from_json(process_json);
    const auto series = depreg::simulate(cfg, n, seed);
    std::copy(series.begin(), series.end(), out);
  });
}

uint64_t depreg_derive_seed(uint64_t master, uint64_t n, uint64_t replication) {
  return depreg::derive_seed(master, n, replication);
}

depreg_status depreg_experiment_from_json(const char* json, depreg_experiment** out) {
  return guard([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new depreg_experiment{depreg::experiment_from_json(json)};
  });
}

void depreg_experiment_destroy(depreg_experiment* experiment) { delete experiment; }

depreg_status depreg_experiment_json(const depreg_experiment* experiment,
                                     char** json_out) {
  return guard([&] {
    require(experiment != nullptr && json_out != nullptr, "null argument");
    *json_out = duplicate(depreg::experiment_to_json(experiment->spec));
  });
}

depreg_status depreg_experiment_sample(const depreg_experiment* experiment, size_t n,
                                       size_t replication, depreg_design** design_out,
                                       double* y_out) {
  return guard([&] {
    require(experiment != nullptr && design_out != nullptr && y_out != nullptr,
            "null argument");
    auto s = depreg::sample_replication(experiment->spec, n, replication);
    copy_out(s.y, y_out);
    *design_out = new depreg_design{std::move(s.design)};
  });
}

depreg_status depreg_experiment_acf(const depreg_experiment* experiment, size_t n,
                                    size_t max_lag, size_t replication, double* out) {
  return guard([&] {
    require(experiment != nullptr && out != nullptr, "null argument");
    const auto points = depreg::acf_report(experiment->spec, n, max_lag, replication);
    for (const auto& [k, v] : points) out[k] = v;
  });
}

depreg_status depreg_experiment_run(const depreg_experiment* experiment,
                                    unsigned threads, depreg_table** out) {
  return guard([&] {
    require(experiment != nullptr && out != nullptr, "null argument");
    *out = new depreg_table{depreg::run_experiment(experiment->spec, threads)};
  });
}

void depreg_table_destroy(depreg_table* table) { delete table; }

size_t depreg_table_rows(const depreg_table* table) {
  return table ? table->table.rows.size() : 0;
}

depreg_status depreg_table_row_get(const depreg_table* table, size_t i,
                                   depreg_table_row* out) {
  return guard([&] {
    require(table != nullptr && out != nullptr, "null argument");
    require(i < table->table.rows.size(), "row index out of range");
    const auto& row = table->table.rows[i];
    out->n = row.n;
    out->frequency = row.rejection_frequency;
    out->mean_statistic = row.mean_statistic;
    out->nonpositive_lrv = row.nonpositive_lrv_count;
    out->has_alternate = row.alternate_frequency.has_value() ? 1 : 0;
    out->alternate_frequency = row.alternate_frequency.value_or(0.0);
  });
}

depreg_status depreg_table_csv(const depreg_table* table, char** csv_out) {
  return guard([&] {
    require(table != nullptr && csv_out != nullptr, "null argument");
    std::ostringstream os;
    depreg::write_csv(table->table, os);
    *csv_out = duplicate(os.str());
  });
}

}  // extern "C"
