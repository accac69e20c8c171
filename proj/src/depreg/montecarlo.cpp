#include "depreg/montecarlo.hpp"

#include "depreg/errors.hpp"
#include "depreg/ols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace depreg {

std::size_t design_columns(DesignKind kind) noexcept {
  return kind == DesignKind::intercept_linear ? 2 : 3;
}

DesignMatrix build_design(DesignKind kind, std::size_t n) {
  if (n < 3) throw Error(Errc::invalid_argument, "designs need n >= 3");
  const auto rows = static_cast<Eigen::Index>(n);
  Matrix x(rows, static_cast<Eigen::Index>(design_columns(kind)));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double i = static_cast<double>(r + 1);
    x(r, 0) = 1.0;
    switch (kind) {
      case DesignKind::intercept_linear:
        x(r, 1) = i;
        break;
      case DesignKind::intercept_quadratic:
        x(r, 1) = i;
        x(r, 2) = i * i;
        break;
      case DesignKind::intercept_sqrt_log:
        x(r, 1) = std::sqrt(i);
        x(r, 2) = std::log(i);
        break;
    }
  }
  return DesignMatrix(std::move(x));
}

void validate(const ExperimentSpec& spec) {
  if (spec.replications < 1) {
    throw Error(Errc::invalid_argument, "replications must be >= 1");
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw Error(Errc::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (spec.beta.size() != design_columns(spec.design_kind)) {
    throw Error(Errc::invalid_argument,
                std::string("beta must have ") +
                    std::to_string(design_columns(spec.design_kind)) +
                    " entries for design " + to_string(spec.design_kind));
  }
  if (spec.n_values.empty()) {
    throw Error(Errc::invalid_argument, "n_values must not be empty");
  }
  const auto keep = null_model_columns(spec.beta.size(), spec.null_cols);
  if (keep.empty()) {
    throw Error(Errc::invalid_argument, "the null model must keep a column");
  }
  validate(spec.process);
  for (std::size_t n : spec.n_values) {
    if (n < 4) throw Error(Errc::invalid_argument, "sample sizes must be >= 4");
    if (spec.statistic == StatisticKind::corrected_truncated && spec.a_n >= n) {
      throw Error(Errc::invalid_argument, "a_n must be smaller than every n");
    }
    if (spec.statistic == StatisticKind::corrected_kernel && spec.bandwidth &&
        (*spec.bandwidth < 1 || 2 * *spec.bandwidth > n - 1)) {
      throw Error(Errc::invalid_argument,
                  "bandwidth outside [1, (n-1)/2] for n = " + std::to_string(n));
    }
  }
  if (spec.statistic == StatisticKind::corrected_kernel &&
      !(spec.delta > 0.0 && spec.delta <= 2.0)) {
    throw Error(Errc::invalid_argument, "delta must lie in (0, 2]");
  }
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DEPREG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Outcome {
  double statistic = 0.0;
  bool reject = false;
  bool nonpositive = false;
  bool alternate_reject = false;
};

Vector mean_response(const DesignMatrix& x, const std::vector<double>& beta) {
  return x.matrix() * Eigen::Map<const Vector>(beta.data(),
                                               static_cast<Eigen::Index>(beta.size()));
}

struct Cell {
  const ExperimentSpec& spec;
  std::size_t n;
  DesignMatrix design;
  OlsSolver full;
  OlsSolver null;
  std::size_t p0;
  Vector mean;
  LrvMethod method;

  Cell(const ExperimentSpec& s, std::size_t n_)
      : spec(s),
        n(n_),
        design(build_design(s.design_kind, n_)),
        full(design),
        null(design.select_columns(null_model_columns(s.beta.size(), s.null_cols))),
        p0(null.cols()),
        mean(mean_response(design, s.beta)),
        method(choose_method(s, n_)) {}

  static LrvMethod choose_method(const ExperimentSpec& s, std::size_t n) {
    if (s.statistic == StatisticKind::corrected_kernel) {
      return KernelF0{s.bandwidth ? *s.bandwidth : default_bandwidth(n, s.delta)};
    }
    return Truncated{s.a_n, s.symmetrized};
  }

  Outcome run(std::size_t r) const {
    const auto eps = simulate(spec.process, n, derive_seed(spec.master_seed, n, r));
    const Vector y = mean + Eigen::Map<const Vector>(eps.data(),
                                                     static_cast<Eigen::Index>(n));
    const FitResult f = full.fit(y);
    const double rss0 = null.fit(y).rss;
    const std::size_t p = design.cols();
    Outcome out;
    if (spec.statistic == StatisticKind::classic) {
      const TestResult t = fisher_classic(rss0, f.rss, n, p, p0, spec.reference);
      out.statistic = t.statistic;
      out.reject = t.p_value < spec.alpha;
      return out;
    }
    const std::span<const double> res(f.residuals.data(), n);
    const AcfEstimate gamma = acf(res, required_lag(method));
    const LrvEstimate est = lrv(gamma, method);
    if (est.nonpositive) {
      out.nonpositive = true;
    } else {
      const TestResult t = fisher_corrected(rss0, f.rss, est, p, p0);
      out.statistic = t.statistic;
      out.reject = t.p_value < spec.alpha;
    }
    if (const auto* t = std::get_if<Truncated>(&method)) {
      const LrvEstimate alt = lrv(gamma, Truncated{t->a_n, !t->symmetrized});
      if (!alt.nonpositive) {
        out.alternate_reject =
            fisher_corrected(rss0, f.rss, alt, p, p0).p_value < spec.alpha;
      }
    }
    return out;
  }
};

}  // namespace

TableResult run_experiment(const ExperimentSpec& spec, unsigned threads) {
  validate(spec);
  const unsigned workers = resolve_thread_count(threads);
  TableResult table;
  table.spec = spec;
  for (std::size_t n : spec.n_values) {
    const Cell cell(spec, n);
    std::vector<Outcome> outcomes(spec.replications);
    auto work = [&](unsigned w) {
      for (std::size_t r = w; r < outcomes.size(); r += workers) {
        outcomes[r] = cell.run(r);
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    TableRow row;
    row.n = n;
    std::size_t rejections = 0, alternate = 0, counted = 0;
    double stat_sum = 0.0;
    for (const Outcome& o : outcomes) {
      rejections += o.reject;
      alternate += o.alternate_reject;
      row.nonpositive_lrv_count += o.nonpositive;
      if (!o.nonpositive) {
        stat_sum += o.statistic;
        ++counted;
      }
    }
    const double total = static_cast<double>(spec.replications);
    row.rejection_frequency = static_cast<double>(rejections) / total;
    row.mean_statistic = counted ? stat_sum / static_cast<double>(counted) : 0.0;
    if (spec.statistic == StatisticKind::corrected_truncated) {
      row.alternate_frequency = static_cast<double>(alternate) / total;
    }
    table.rows.push_back(row);
  }
  return table;
}

Sample sample_replication(const ExperimentSpec& spec, std::size_t n,
                          std::size_t replication) {
  validate(spec.process);
  if (spec.beta.size() != design_columns(spec.design_kind)) {
    throw Error(Errc::invalid_argument, "beta length does not match the design");
  }
  DesignMatrix x = build_design(spec.design_kind, n);
  const auto eps =
      simulate(spec.process, n, derive_seed(spec.master_seed, n, replication));
  Vector y = mean_response(x, spec.beta) +
             Eigen::Map<const Vector>(eps.data(), static_cast<Eigen::Index>(n));
  return Sample{std::move(x), std::move(y)};
}

AcfPoints acf_report(std::span<const double> series, std::size_t max_lag) {
  const AcfEstimate est = acf(series, max_lag);
  AcfPoints out;
  out.reserve(est.values.size());
  for (std::size_t k = 0; k < est.values.size(); ++k) out.emplace_back(k, est.values[k]);
  return out;
}

AcfPoints acf_report(const ExperimentSpec& spec, std::size_t n, std::size_t max_lag,
                     std::size_t replication) {
  const Sample s = sample_replication(spec, n, replication);
  const FitResult f = fit(s.design, s.y);
  return acf_report(std::span<const double>(f.residuals.data(), n), max_lag);
}

const char* to_string(DesignKind kind) noexcept {
  switch (kind) {
    case DesignKind::intercept_linear: return "intercept_linear";
    case DesignKind::intercept_quadratic: return "intercept_quadratic";
    case DesignKind::intercept_sqrt_log: return "intercept_sqrt_log";
  }
  return "?";
}

const char* to_string(StatisticKind kind) noexcept {
  switch (kind) {
    case StatisticKind::classic: return "classic";
    case StatisticKind::corrected_truncated: return "truncated";
    case StatisticKind::corrected_kernel: return "kernel";
  }
  return "?";
}

}  // namespace depreg
