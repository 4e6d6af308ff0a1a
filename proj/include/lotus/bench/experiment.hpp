#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lotus/dual/dual.hpp"
#include "lotus/gen/generator.hpp"

namespace lotus::bench {

// One completed solver run. Objectives are stored in profit orientation
// (negated minimization values), matching how reports are read.
struct RunArtifact {
  std::string pair_id;  // same id across the dd/lotus runs being compared
  std::string method;   // "dd" or "lotus"
  double z_primal = 0.0;
  double z_dual = 0.0;
  bool feasible = false;  // a finite primal bound exists
  std::vector<dual::IterationRecord> trace;
  double warm_start_time_s = 0.0;
  double full_time_s = 0.0;
};

enum class Outcome { Win, Draw, Loss };

struct PairRow {
  std::string pair_id;
  double zp_lotus = 0.0, zp_dd = 0.0;
  double zd_lotus = 0.0, zd_dd = 0.0;
  double improvement_pct = 0.0;
  Outcome outcome = Outcome::Draw;
  bool excluded = false;
  std::string excluded_side;  // "dd", "lotus" or "both"
};

struct RatioSeries {
  double grid_step = 1.0;
  std::vector<double> t;
  std::vector<double> r;
};

struct RatioAggregate {
  std::vector<double> t;
  std::vector<double> mean, median, q25, q75;
};

struct TimingTable {
  long n_warm = 0, n_full = 0, n_dd = 0;
  double t_warm_mean = 0.0;  // t_L(S')
  double t_full_mean = 0.0;  // t_L(S)
  double t_dd_mean = 0.0;    // t_DD
  double speed_gain_pct = 0.0;   // (t_DD - t_L(S)) / t_DD * 100
  double warm_saving_pct = 0.0;  // (t_DD - t_L(S')) / t_DD * 100
};

struct ComparisonReport {
  std::vector<PairRow> rows;
  int wins = 0, draws = 0, losses = 0;
  int excluded = 0;
  double avg_improvement_pct = 0.0;
  bool wilcoxon_valid = false;
  double wilcoxon_w = 0.0;
  double wilcoxon_p = 1.0;
  RatioAggregate ratio;
  TimingTable timing;
};

struct ExperimentConfig {
  std::vector<std::string> instance_files;        // either files...
  std::optional<gen::GenConfig> generator;        // ...or a generator template
  std::vector<std::string> methods{"dd", "lotus"};
  std::vector<std::uint64_t> seeds{1};
  double budget_s = 60.0;
  double fraction = 0.30;
  int warm_start_iterations = 10;
  double grid_step = 1.0;
  std::string out_dir;

  void validate() const;  // throws std::invalid_argument
};

// Best-primal profit ratio R(t) on a shared wall-clock grid. Incumbents are
// step-interpolated (last value carried forward); R(t) = 1 until both methods
// hold one. horizon <= 0 means the later of the two trace ends.
RatioSeries ratio_series(const std::vector<dual::IterationRecord>& trace_lotus,
                         const std::vector<dual::IterationRecord>& trace_dd,
                         double grid_step = 1.0, double horizon = -1.0);

// Pointwise mean/median/quartiles over series sharing a grid step. Series are
// extended to the longest grid by carrying their last value forward.
RatioAggregate aggregate_ratios(const std::vector<RatioSeries>& series);

// Per-phase mean iteration times over all supplied traces.
TimingTable timing_table(const std::vector<RunArtifact>& runs);

// Pair up artifacts by pair_id and assemble the full report. Pairs where a
// side lacks a feasible positive primal are listed but excluded from the
// improvement mean and the signed-rank test.
ComparisonReport compare_artifacts(const std::vector<RunArtifact>& runs,
                                   double grid_step = 1.0, double horizon = -1.0);

void write_report(const ComparisonReport& report, std::ostream& out);

// Run the configured methods on every (instance, seed) pair, persist traces
// and summaries under out_dir (if set), and build the comparison report.
ComparisonReport run_experiment(const ExperimentConfig& config);

}  // namespace lotus::bench
