#pragma once

// Declarative level/power studies: for each sample size, simulate N error
// series, fit the full and null regressions, evaluate the chosen F statistic
// and count rejections at the nominal level.

#include "depreg/design.hpp"
#include "depreg/inference.hpp"
#include "depreg/processes.hpp"
#include "depreg/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace depreg {

enum class DesignKind { intercept_linear, intercept_quadratic, intercept_sqrt_log };

std::size_t design_columns(DesignKind kind) noexcept;

/// Columns for rows i = 1..n: (1, i), (1, i, i^2) or (1, sqrt(i), log(i)).
DesignMatrix build_design(DesignKind kind, std::size_t n);

enum class StatisticKind { classic, corrected_truncated, corrected_kernel };

struct ExperimentSpec {
  DesignKind design_kind = DesignKind::intercept_linear;
  std::vector<double> beta{3.0, 0.0};
  ProcessConfig process;
  std::vector<std::size_t> n_values{1000};
  StatisticKind statistic = StatisticKind::corrected_truncated;
  std::size_t a_n = 0;
  std::optional<std::size_t> bandwidth;  // kernel method; default_bandwidth when empty
  double delta = 2.0;
  bool symmetrized = true;
  std::vector<std::size_t> null_cols{1};  // tested coefficients, 0-based
  std::size_t replications = 2000;
  double alpha = 0.05;
  std::uint64_t master_seed = 0;
  Reference reference = Reference::chi2_over_dof;  // classic statistic only
};

void validate(const ExperimentSpec& spec);

struct TableRow {
  std::size_t n = 0;
  double rejection_frequency = 0.0;
  double mean_statistic = 0.0;
  std::size_t nonpositive_lrv_count = 0;
  // Truncated statistic only: the same replications under the other
  // symmetrization convention.
  std::optional<double> alternate_frequency;
};

struct TableResult {
  std::vector<TableRow> rows;
  ExperimentSpec spec;
};

/// threads == 0 picks DEPREG_THREADS or the hardware concurrency. The result
/// does not depend on the thread count.
TableResult run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

unsigned resolve_thread_count(unsigned requested);

struct Sample {
  DesignMatrix design;
  Vector y;
};

/// One replication's data: Y = X beta + scale * eps with eps drawn under
/// derive_seed(master_seed, n, replication).
Sample sample_replication(const ExperimentSpec& spec, std::size_t n,
                          std::size_t replication = 0);

using AcfPoints = std::vector<std::pair<std::size_t, double>>;

/// (k, gamma*_k) for k = 0..max_lag from the residuals of one simulated fit.
AcfPoints acf_report(const ExperimentSpec& spec, std::size_t n, std::size_t max_lag,
                     std::size_t replication = 0);
AcfPoints acf_report(std::span<const double> series, std::size_t max_lag);

// Structured config documents (JSON mirroring the ExperimentSpec field names).
ExperimentSpec experiment_from_json(const std::string& text);
std::string experiment_to_json(const ExperimentSpec& spec);
ProcessConfig process_from_json(const std::string& text);
std::string process_to_json(const ProcessConfig& config);

/// CSV with '#' metadata lines (experiment echo), header n,freq,mean_stat,nonpos_lrv.
void write_csv(const TableResult& table, std::ostream& out);

const char* to_string(DesignKind kind) noexcept;
const char* to_string(StatisticKind kind) noexcept;

}  // namespace depreg
