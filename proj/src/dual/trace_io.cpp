#include "lotus/dual/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lotus::dual {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace(const std::vector<IterationRecord>& trace, std::ostream& os) {
  os << "k,phase,t_wall_s,z_dual,z_primal_best,rel_gap,alpha,g_norm,iter_time_s,certified\n";
  for (const auto& r : trace) {
    os << r.k << ',' << phase_name(r.phase) << ',' << fmt(r.t_wall_s) << ',' << fmt(r.z_dual)
       << ',' << fmt(r.z_primal_best) << ',' << fmt(r.rel_gap) << ',' << fmt(r.alpha) << ','
       << fmt(r.g_norm) << ',' << fmt(r.iter_time_s) << ',' << (r.certified ? 1 : 0) << '\n';
  }
}

std::vector<IterationRecord> read_trace(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("k,phase,", 0) != 0)
    throw TraceParseError("missing trace header");
  std::vector<IterationRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw TraceParseError("bad trace row: " + line);
    IterationRecord r;
    r.k = std::stol(fields[0]);
    if (fields[1] == "warm_start")
      r.phase = Phase::WarmStart;
    else if (fields[1] == "full")
      r.phase = Phase::Full;
    else
      throw TraceParseError("unknown phase: " + fields[1]);
    r.t_wall_s = std::stod(fields[2]);
    r.z_dual = std::stod(fields[3]);
    r.z_primal_best = std::stod(fields[4]);
    r.rel_gap = std::stod(fields[5]);
    r.alpha = std::stod(fields[6]);
    r.g_norm = std::stod(fields[7]);
    r.iter_time_s = std::stod(fields[8]);
    r.certified = fields[9] == "1";
    out.push_back(r);
  }
  return out;
}

void save_trace(const std::vector<IterationRecord>& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw TraceParseError("cannot open " + path);
  write_trace(trace, os);
}

std::vector<IterationRecord> load_trace(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw TraceParseError("cannot open " + path);
  return read_trace(is);
}

void write_summary(const RunResult& r, const std::string& method, std::ostream& os) {
  os << "method " << method << '\n';
  os << "z_primal " << fmt(r.z_primal) << '\n';
  os << "z_dual " << fmt(r.z_dual) << '\n';
  const double gap =
      std::abs(r.z_primal - r.z_dual) / std::max(std::abs(r.z_primal), 1e-10);
  os << "rel_gap " << fmt(gap) << '\n';
  os << "iterations " << r.trace.size() << '\n';
  os << "warm_start_time_s " << fmt(r.warm_start_time_s) << '\n';
  os << "full_time_s " << fmt(r.full_time_s) << '\n';
  os << "x_first_stage";
  for (double v : r.x_first_stage) os << ' ' << fmt(v);
  os << '\n';
}

}  // namespace lotus::dual
