#include "lotus/gen/generator.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace lotus::gen {

namespace {

// splitmix64, used only to derive independent stream seeds per component so
// adding a component never shifts the draws of another
std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// uniform [0,1) from the top 53 bits; avoids the unspecified behavior of
// std::uniform_real_distribution across standard libraries
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

long uniform_int(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

void GenConfig::validate() const {
  if (num_scenarios < 1 || num_furniture < 1 || num_resources < 1)
    throw InvalidConfig("counts must be >= 1");
  if (!(scarcity > 0.0 && scarcity <= 1.0)) throw InvalidConfig("scarcity must be in (0,1]");
  if (demand_mean <= 0.0) throw InvalidConfig("demand mean must be positive");
  if (demand_dispersion < 0.0 || demand_dispersion >= 1.0)
    throw InvalidConfig("demand dispersion must be in [0,1)");
  if (high_demand_factor < 1.0) throw InvalidConfig("high demand factor must be >= 1");
  if (high_regime_prob < 0.0 || high_regime_prob > 1.0)
    throw InvalidConfig("high regime probability must be in [0,1]");
  if (fixed_cost_factor < 0.0) throw InvalidConfig("fixed cost factor must be >= 0");
  if (batch_min < 0 || batch_max < batch_min) throw InvalidConfig("bad batch size range");
}

smip::ProductionInstance generate(const GenConfig& cfg) {
  cfg.validate();
  const int R = cfg.num_resources;
  const int F = cfg.num_furniture;
  const int S = cfg.num_scenarios;

  std::uint64_t root = cfg.seed;
  std::mt19937_64 cost_rng(splitmix(root));
  std::mt19937_64 tech_rng(splitmix(root));
  std::mt19937_64 batch_rng(splitmix(root));
  std::mt19937_64 demand_rng(splitmix(root));

  smip::ProductionInstance inst;
  inst.resource_cost.resize(R);
  for (double& c : inst.resource_cost) c = 1.0 + 2.0 * unit(cost_rng);

  inst.technology.assign(R, std::vector<double>(F));
  for (auto& row : inst.technology)
    for (double& w : row) w = static_cast<double>(uniform_int(tech_rng, 1, 3));

  inst.min_batch.resize(F);
  for (double& b : inst.min_batch)
    b = static_cast<double>(uniform_int(batch_rng, cfg.batch_min, cfg.batch_max));

  // sale price covers the variable resource cost with margin; shortage
  // penalty makes serving demand preferable whenever capacity allows
  inst.sale_price.resize(F);
  inst.shortage_penalty.resize(F);
  for (int f = 0; f < F; ++f) {
    double unit_cost = 0.0;
    for (int r = 0; r < R; ++r) unit_cost += inst.resource_cost[r] * inst.technology[r][f];
    inst.sale_price[f] = unit_cost * (1.5 + unit(cost_rng));
    inst.shortage_penalty[f] = 0.5 * inst.sale_price[f];
  }

  inst.demand.assign(S, std::vector<double>(F));
  inst.probability.assign(S, 1.0 / S);
  for (int s = 0; s < S; ++s)
    for (int f = 0; f < F; ++f) {
      const bool high = unit(demand_rng) < cfg.high_regime_prob;
      const double regime = high ? cfg.high_demand_factor : 1.0;
      const double noise = 1.0 + cfg.demand_dispersion * (2.0 * unit(demand_rng) - 1.0);
      inst.demand[s][f] = std::max(0.0, std::round(cfg.demand_mean * regime * noise));
    }

  // capacity tight against expected use; fixed cost a share of the expected
  // variable profit routed through each resource
  const double mean_demand =
      cfg.demand_mean * (1.0 + cfg.high_regime_prob * (cfg.high_demand_factor - 1.0));
  inst.resource_cap.resize(R);
  double expected_profit = 0.0;
  for (int f = 0; f < F; ++f) {
    double unit_cost = 0.0;
    for (int r = 0; r < R; ++r) unit_cost += inst.resource_cost[r] * inst.technology[r][f];
    expected_profit += (inst.sale_price[f] - unit_cost) * mean_demand;
  }
  for (int r = 0; r < R; ++r) {
    double expected_use = 0.0;
    for (int f = 0; f < F; ++f) expected_use += inst.technology[r][f] * mean_demand;
    inst.resource_cap[r] = std::max(1.0, std::round(cfg.scarcity * expected_use));
  }
  inst.fixed_cost.assign(R, std::max(0.0, cfg.fixed_cost_factor * expected_profit / R));

  inst.validate();
  return inst;
}

ValidationReport validate_instance(const smip::ProductionInstance& inst) {
  ValidationReport rep;
  const int R = inst.num_resources();
  const int F = inst.num_furniture();
  const int S = inst.num_scenarios();

  rep.dimensions_ok = R > 0 && F > 0 && S > 0 &&
                      static_cast<int>(inst.shortage_penalty.size()) == F &&
                      static_cast<int>(inst.fixed_cost.size()) == R &&
                      static_cast<int>(inst.technology.size()) == R &&
                      static_cast<int>(inst.resource_cap.size()) == R &&
                      static_cast<int>(inst.min_batch.size()) == F &&
                      static_cast<int>(inst.demand.size()) == S;
  for (const auto& row : inst.technology)
    rep.dimensions_ok = rep.dimensions_ok && static_cast<int>(row.size()) == F;
  for (const auto& d : inst.demand)
    rep.dimensions_ok = rep.dimensions_ok && static_cast<int>(d.size()) == F;

  double mass = 0.0;
  for (double p : inst.probability) mass += p;
  rep.probability_ok = std::abs(mass - 1.0) <= 1e-9;

  rep.compact_ok = true;
  for (double l : inst.resource_cap) rep.compact_ok = rep.compact_ok && std::isfinite(l);
  for (const auto& d : inst.demand)
    for (double v : d) rep.compact_ok = rep.compact_ok && std::isfinite(v);

  rep.nonnegative_ok = true;
  const auto nonneg = [&](const std::vector<double>& v) {
    for (double x : v) rep.nonnegative_ok = rep.nonnegative_ok && x >= 0.0;
  };
  nonneg(inst.resource_cost);
  nonneg(inst.sale_price);
  nonneg(inst.shortage_penalty);
  nonneg(inst.fixed_cost);
  nonneg(inst.resource_cap);
  nonneg(inst.min_batch);
  for (const auto& d : inst.demand) nonneg(d);

  // unmet-demand variables absorb any demand, so the second stage stays
  // feasible for every acquisition as long as demands are finite and >= 0
  rep.recourse_ok = rep.dimensions_ok && rep.compact_ok && rep.nonnegative_ok;
  return rep;
}

void write_report(const ValidationReport& r, std::ostream& os) {
  const auto line = [&](const char* name, bool ok) {
    os << name << ' ' << (ok ? "pass" : "fail") << '\n';
  };
  line("dimensions", r.dimensions_ok);
  line("probability_mass", r.probability_ok);
  line("compactness", r.compact_ok);
  line("nonnegativity", r.nonnegative_ok);
  line("complete_recourse", r.recourse_ok);
}

GenConfig parse_config(std::istream& is) {
  GenConfig cfg;
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value)) throw InvalidConfig("bad config line: " + line);
    kv[key] = value;
  }
  const auto take = [&](const char* key, auto& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    std::istringstream vs(it->second);
    if (!(vs >> out)) throw InvalidConfig(std::string("bad value for ") + key);
    kv.erase(it);
  };
  take("scenarios", cfg.num_scenarios);
  take("furniture", cfg.num_furniture);
  take("resources", cfg.num_resources);
  take("seed", cfg.seed);
  take("demand_mean", cfg.demand_mean);
  take("demand_dispersion", cfg.demand_dispersion);
  take("high_demand_factor", cfg.high_demand_factor);
  take("high_regime_prob", cfg.high_regime_prob);
  take("scarcity", cfg.scarcity);
  take("fixed_cost_factor", cfg.fixed_cost_factor);
  take("batch_min", cfg.batch_min);
  take("batch_max", cfg.batch_max);
  if (!kv.empty()) throw InvalidConfig("unknown config key: " + kv.begin()->first);
  cfg.validate();
  return cfg;
}

void write_manifest(const GenConfig& cfg, std::ostream& os) {
  os << "genmanifest v1\n";
  os << "format prodinst v1\n";
  os << "scenarios " << cfg.num_scenarios << '\n';
  os << "furniture " << cfg.num_furniture << '\n';
  os << "resources " << cfg.num_resources << '\n';
  os << "seed " << cfg.seed << '\n';
  os << "demand_mean " << cfg.demand_mean << '\n';
  os << "demand_dispersion " << cfg.demand_dispersion << '\n';
  os << "high_demand_factor " << cfg.high_demand_factor << '\n';
  os << "high_regime_prob " << cfg.high_regime_prob << '\n';
  os << "scarcity " << cfg.scarcity << '\n';
  os << "fixed_cost_factor " << cfg.fixed_cost_factor << '\n';
  os << "batch_min " << cfg.batch_min << '\n';
  os << "batch_max " << cfg.batch_max << '\n';
}

}  // namespace lotus::gen
