#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lotus/smip/production.hpp"

namespace lotus::gen {

class InvalidConfig : public std::runtime_error {
 public:
  explicit InvalidConfig(const std::string& what) : std::runtime_error(what) {}
};

struct GenConfig {
  int num_scenarios = 4;
  int num_furniture = 2;
  int num_resources = 2;
  std::uint64_t seed = 1;
  // demand model: two-component mixture, a base regime and a rarer
  // high-demand regime, with multiplicative dispersion inside each
  double demand_mean = 6.0;
  double demand_dispersion = 0.35;
  double high_demand_factor = 2.5;
  double high_regime_prob = 0.25;
  double scarcity = 0.8;          // capacity = scarcity * expected use, in (0,1]
  double fixed_cost_factor = 0.2; // share of expected variable profit per resource
  int batch_min = 1;
  int batch_max = 3;

  void validate() const;
  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

smip::ProductionInstance generate(const GenConfig& cfg);

struct ValidationReport {
  bool dimensions_ok = false;
  bool probability_ok = false;
  bool compact_ok = false;
  bool nonnegative_ok = false;
  bool recourse_ok = false;
  bool all_ok() const {
    return dimensions_ok && probability_ok && compact_ok && nonnegative_ok && recourse_ok;
  }
};

ValidationReport validate_instance(const smip::ProductionInstance& inst);
void write_report(const ValidationReport& r, std::ostream& os);

// config file: "key value" lines, unknown keys rejected
GenConfig parse_config(std::istream& is);
void write_manifest(const GenConfig& cfg, std::ostream& os);

}  // namespace lotus::gen
