#include "lotus/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "lotus/bench/wilcoxon.hpp"
#include "lotus/dual/trace_io.hpp"
#include "lotus/smip/instance_io.hpp"
#include "lotus/smip/production.hpp"

namespace lotus::bench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Best-primal profit at wall-clock time t, step-interpolated from the trace.
// Records carry minimization values; profit negates them.
double incumbent_profit_at(const std::vector<dual::IterationRecord>& trace, double t) {
  double best = -kInf;
  for (const auto& rec : trace) {
    if (rec.t_wall_s > t) break;
    if (std::isfinite(rec.z_primal_best)) best = std::max(best, -rec.z_primal_best);
  }
  return best;
}

double trace_end(const std::vector<dual::IterationRecord>& trace) {
  return trace.empty() ? 0.0 : trace.back().t_wall_s;
}

// Linear-interpolation quantile on a sorted vector.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (budget_s <= 0.0) throw std::invalid_argument("budget must be positive");
  if (methods.empty()) throw std::invalid_argument("at least one method required");
  for (const auto& m : methods)
    if (m != "dd" && m != "lotus") throw std::invalid_argument("unknown method: " + m);
  if (instance_files.empty() && !generator)
    throw std::invalid_argument("no instance source");
  if (seeds.empty()) throw std::invalid_argument("at least one seed required");
  if (fraction <= 0.0 || fraction > 1.0) throw std::invalid_argument("fraction in (0,1]");
  if (grid_step <= 0.0) throw std::invalid_argument("grid step must be positive");
}

RatioSeries ratio_series(const std::vector<dual::IterationRecord>& trace_lotus,
                         const std::vector<dual::IterationRecord>& trace_dd,
                         double grid_step, double horizon) {
  if (horizon <= 0.0) horizon = std::max(trace_end(trace_lotus), trace_end(trace_dd));
  RatioSeries out;
  out.grid_step = grid_step;
  for (double t = 0.0; t <= horizon + 1e-12; t += grid_step) {
    const double zl = incumbent_profit_at(trace_lotus, t);
    const double zd = incumbent_profit_at(trace_dd, t);
    double r = 1.0;
    if (std::isfinite(zl) && std::isfinite(zd) && zd != 0.0) r = zl / zd;
    out.t.push_back(t);
    out.r.push_back(r);
  }
  return out;
}

RatioAggregate aggregate_ratios(const std::vector<RatioSeries>& series) {
  RatioAggregate agg;
  if (series.empty()) return agg;
  std::size_t len = 0;
  for (const auto& s : series) len = std::max(len, s.t.size());
  const double step = series.front().grid_step;
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> vals;
    for (const auto& s : series) {
      if (s.r.empty()) continue;
      vals.push_back(i < s.r.size() ? s.r[i] : s.r.back());
    }
    if (vals.empty()) continue;
    double sum = 0.0;
    for (double v : vals) sum += v;
    agg.t.push_back(static_cast<double>(i) * step);
    agg.mean.push_back(sum / static_cast<double>(vals.size()));
    agg.median.push_back(quantile(vals, 0.5));
    agg.q25.push_back(quantile(vals, 0.25));
    agg.q75.push_back(quantile(vals, 0.75));
  }
  return agg;
}

TimingTable timing_table(const std::vector<RunArtifact>& runs) {
  TimingTable t;
  double sum_warm = 0.0, sum_full = 0.0, sum_dd = 0.0;
  for (const auto& run : runs) {
    for (const auto& rec : run.trace) {
      if (run.method == "dd") {
        ++t.n_dd;
        sum_dd += rec.iter_time_s;
      } else if (rec.phase == dual::Phase::WarmStart) {
        ++t.n_warm;
        sum_warm += rec.iter_time_s;
      } else {
        ++t.n_full;
        sum_full += rec.iter_time_s;
      }
    }
  }
  if (t.n_warm > 0) t.t_warm_mean = sum_warm / static_cast<double>(t.n_warm);
  if (t.n_full > 0) t.t_full_mean = sum_full / static_cast<double>(t.n_full);
  if (t.n_dd > 0) t.t_dd_mean = sum_dd / static_cast<double>(t.n_dd);
  if (t.t_dd_mean > 0.0) {
    t.speed_gain_pct = (t.t_dd_mean - t.t_full_mean) / t.t_dd_mean * 100.0;
    t.warm_saving_pct = (t.t_dd_mean - t.t_warm_mean) / t.t_dd_mean * 100.0;
  }
  return t;
}

ComparisonReport compare_artifacts(const std::vector<RunArtifact>& runs,
                                   double grid_step, double horizon) {
  ComparisonReport rep;
  rep.timing = timing_table(runs);

  std::map<std::string, const RunArtifact*> dd_by_pair, lotus_by_pair;
  for (const auto& run : runs) {
    auto& slot = (run.method == "dd" ? dd_by_pair : lotus_by_pair)[run.pair_id];
    slot = &run;
  }

  std::vector<double> diffs;
  std::vector<double> improvements;
  std::vector<RatioSeries> ratios;
  for (const auto& [pair_id, dd] : dd_by_pair) {
    auto it = lotus_by_pair.find(pair_id);
    if (it == lotus_by_pair.end()) continue;
    const RunArtifact* lot = it->second;

    PairRow row;
    row.pair_id = pair_id;
    row.zp_dd = dd->z_primal;
    row.zp_lotus = lot->z_primal;
    row.zd_dd = dd->z_dual;
    row.zd_lotus = lot->z_dual;

    const bool dd_ok = dd->feasible && dd->z_primal > 0.0;
    const bool lotus_ok = lot->feasible && lot->z_primal > 0.0;
    if (!dd_ok || !lotus_ok) {
      row.excluded = true;
      row.excluded_side = !dd_ok && !lotus_ok ? "both" : (!dd_ok ? "dd" : "lotus");
      ++rep.excluded;
      rep.rows.push_back(row);
      continue;
    }

    const double delta = lot->z_primal - dd->z_primal;
    row.improvement_pct = delta / std::fabs(dd->z_primal) * 100.0;
    const double rel = std::fabs(delta) / std::max(std::fabs(lot->z_primal), 1e-10);
    if (rel <= 1e-6)
      row.outcome = Outcome::Draw;
    else
      row.outcome = delta > 0.0 ? Outcome::Win : Outcome::Loss;
    switch (row.outcome) {
      case Outcome::Win: ++rep.wins; break;
      case Outcome::Draw: ++rep.draws; break;
      case Outcome::Loss: ++rep.losses; break;
    }
    diffs.push_back(delta);
    improvements.push_back(row.improvement_pct);
    ratios.push_back(ratio_series(lot->trace, dd->trace, grid_step, horizon));
    rep.rows.push_back(row);
  }

  if (!improvements.empty()) {
    double sum = 0.0;
    for (double v : improvements) sum += v;
    rep.avg_improvement_pct = sum / static_cast<double>(improvements.size());
  }
  rep.ratio = aggregate_ratios(ratios);
  if (!diffs.empty()) {
    try {
      const WilcoxonResult w = wilcoxon_signed_rank(diffs);
      rep.wilcoxon_valid = true;
      rep.wilcoxon_w = w.statistic;
      rep.wilcoxon_p = w.p_value;
    } catch (const AllZeroDifferences&) {
      rep.wilcoxon_valid = false;
    }
  }
  return rep;
}

void write_report(const ComparisonReport& rep, std::ostream& out) {
  char buf[256];
  out << "comparison report v1\n";
  std::snprintf(buf, sizeof buf, "pairs %zu\nwins %d\ndraws %d\nlosses %d\nexcluded %d\n",
                rep.rows.size(), rep.wins, rep.draws, rep.losses, rep.excluded);
  out << buf;
  std::snprintf(buf, sizeof buf, "avg_improvement_pct %.6f\n", rep.avg_improvement_pct);
  out << buf;
  if (rep.wilcoxon_valid) {
    std::snprintf(buf, sizeof buf, "wilcoxon_w %.6f\nwilcoxon_p %.6g\n", rep.wilcoxon_w,
                  rep.wilcoxon_p);
    out << buf;
  } else {
    out << "wilcoxon_w n/a\nwilcoxon_p n/a\n";
  }
  std::snprintf(buf, sizeof buf,
                "timing n_warm %ld n_full %ld n_dd %ld t_warm %.6f t_full %.6f t_dd %.6f "
                "speed_gain_pct %.1f warm_saving_pct %.1f\n",
                rep.timing.n_warm, rep.timing.n_full, rep.timing.n_dd,
                rep.timing.t_warm_mean, rep.timing.t_full_mean, rep.timing.t_dd_mean,
                rep.timing.speed_gain_pct, rep.timing.warm_saving_pct);
  out << buf;
  out << "rows pair_id zp_lotus zp_dd zd_lotus zd_dd improvement_pct outcome excluded\n";
  for (const auto& r : rep.rows) {
    const std::string oc = r.excluded ? "excluded:" + r.excluded_side
                           : r.outcome == Outcome::Win ? "win"
                           : r.outcome == Outcome::Draw ? "draw"
                                                        : "loss";
    std::snprintf(buf, sizeof buf, "row %s %.6f %.6f %.6f %.6f %.4f %s\n", r.pair_id.c_str(),
                  r.zp_lotus, r.zp_dd, r.zd_lotus, r.zd_dd, r.improvement_pct, oc.c_str());
    out << buf;
  }
  out << "ratio t mean median q25 q75\n";
  for (std::size_t i = 0; i < rep.ratio.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "r %.3f %.6f %.6f %.6f %.6f\n", rep.ratio.t[i],
                  rep.ratio.mean[i], rep.ratio.median[i], rep.ratio.q25[i], rep.ratio.q75[i]);
    out << buf;
  }
}

ComparisonReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  if (!config.out_dir.empty()) fs::create_directories(config.out_dir);

  std::vector<RunArtifact> artifacts;
  for (std::uint64_t seed : config.seeds) {
    std::vector<std::pair<std::string, smip::TwoStageProblem>> problems;
    if (!config.instance_files.empty()) {
      for (const auto& file : config.instance_files) {
        const auto inst = smip::load_instance(file);
        problems.emplace_back(fs::path(file).stem().string() + "_s" + std::to_string(seed),
                              smip::build_production_problem(inst));
      }
    } else {
      gen::GenConfig gc = *config.generator;
      gc.seed = seed;
      const auto inst = gen::generate(gc);
      problems.emplace_back("gen_s" + std::to_string(seed),
                            smip::build_production_problem(inst));
    }

    for (auto& [pair_id, problem] : problems) {
      for (const auto& method : config.methods) {
        dual::RunConfig rc;
        rc.total_budget_s = config.budget_s;
        rc.fraction = config.fraction;
        rc.warm_start_iterations = config.warm_start_iterations;
        const dual::RunResult res = method == "dd" ? dual::run_dd(problem, rc)
                                                   : dual::run_lotus(problem, rc);
        RunArtifact art;
        art.pair_id = pair_id;
        art.method = method;
        art.z_primal = -res.z_primal;  // profit orientation
        art.z_dual = -res.z_dual;
        art.feasible = std::isfinite(res.z_primal);
        art.trace = res.trace;
        art.warm_start_time_s = res.warm_start_time_s;
        art.full_time_s = res.full_time_s;
        if (!config.out_dir.empty()) {
          const fs::path dir = fs::path(config.out_dir) / (pair_id + "_" + method);
          fs::create_directories(dir);
          dual::save_trace(res.trace, (dir / "trace.csv").string());
          std::ofstream sum(dir / "summary.txt");
          dual::write_summary(res, method, sum);
        }
        artifacts.push_back(std::move(art));
      }
    }
  }

  // Unpaired runs (single-method configs) simply produce no comparison rows.
  ComparisonReport rep = compare_artifacts(artifacts, config.grid_step);
  if (!config.out_dir.empty()) {
    std::ofstream out(fs::path(config.out_dir) / "report.txt");
    write_report(rep, out);
  }
  return rep;
}

}  // namespace lotus::bench
