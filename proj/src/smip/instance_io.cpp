#include "lotus/smip/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lotus::smip {
namespace {

constexpr const char* kMagic = "prodinst";
constexpr int kVersion = 1;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vec(std::ostream& os, const char* tag, const std::vector<double>& v) {
  os << tag;
  for (double x : v) os << " " << fmt(x);
  os << "\n";
}

std::vector<double> read_vec(std::istream& is, const std::string& tag, size_t count) {
  std::string got;
  is >> got;
  if (got != tag) throw ParseError("expected '" + tag + "', got '" + got + "'");
  std::vector<double> v(count);
  for (auto& x : v)
    if (!(is >> x)) throw ParseError("short read in '" + tag + "'");
  return v;
}

}  // namespace

void serialize_instance(const ProductionInstance& inst, std::ostream& os) {
  inst.validate();
  const int R = inst.num_resources(), F = inst.num_furniture(), S = inst.num_scenarios();
  os << kMagic << " v" << kVersion << " " << R << " " << F << " " << S << "\n";
  write_vec(os, "resource_cost", inst.resource_cost);
  write_vec(os, "sale_price", inst.sale_price);
  write_vec(os, "shortage_penalty", inst.shortage_penalty);
  write_vec(os, "fixed_cost", inst.fixed_cost);
  write_vec(os, "resource_cap", inst.resource_cap);
  write_vec(os, "min_batch", inst.min_batch);
  // technology as (row, col, value) triples
  os << "technology";
  for (int r = 0; r < R; ++r)
    for (int f = 0; f < F; ++f)
      if (inst.technology[r][f] != 0.0)
        os << " " << r << "," << f << "," << fmt(inst.technology[r][f]);
  os << "\n";
  for (int s = 0; s < S; ++s) {
    os << "scenario " << s << " " << fmt(inst.probability[s]);
    for (double d : inst.demand[s]) os << " " << fmt(d);
    os << "\n";
  }
  os << "end\n";
}

ProductionInstance parse_instance(std::istream& is) {
  std::string magic, version;
  int R = 0, F = 0, S = 0;
  if (!(is >> magic >> version >> R >> F >> S)) throw ParseError("bad header");
  if (magic != kMagic) throw ParseError("not a production instance file");
  if (version != "v1") throw ParseError("unsupported version " + version);
  if (R < 1 || F < 1 || S < 1) throw ParseError("bad dimensions");

  ProductionInstance inst;
  inst.resource_cost = read_vec(is, "resource_cost", R);
  inst.sale_price = read_vec(is, "sale_price", F);
  inst.shortage_penalty = read_vec(is, "shortage_penalty", F);
  inst.fixed_cost = read_vec(is, "fixed_cost", R);
  inst.resource_cap = read_vec(is, "resource_cap", R);
  inst.min_batch = read_vec(is, "min_batch", F);

  std::string tag;
  is >> tag;
  if (tag != "technology") throw ParseError("expected 'technology'");
  inst.technology.assign(R, std::vector<double>(F, 0.0));
  std::string line;
  std::getline(is, line);
  std::istringstream ts(line);
  std::string trip;
  while (ts >> trip) {
    int r, f;
    double v;
    if (std::sscanf(trip.c_str(), "%d,%d,%lf", &r, &f, &v) != 3)
      throw ParseError("bad technology triple '" + trip + "'");
    if (r < 0 || r >= R || f < 0 || f >= F) throw ParseError("technology index out of range");
    inst.technology[r][f] = v;
  }

  inst.probability.resize(S);
  inst.demand.assign(S, std::vector<double>(F));
  for (int s = 0; s < S; ++s) {
    int idx;
    is >> tag >> idx;
    if (tag != "scenario" || idx != s) throw ParseError("expected scenario " + std::to_string(s));
    if (!(is >> inst.probability[s])) throw ParseError("bad probability");
    for (int f = 0; f < F; ++f)
      if (!(is >> inst.demand[s][f])) throw ParseError("bad demand entry");
  }
  is >> tag;
  if (tag != "end") throw ParseError("missing trailer");
  inst.validate();
  return inst;
}

void save_instance(const ProductionInstance& inst, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open " + path + " for writing");
  serialize_instance(inst, os);
}

ProductionInstance load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path);
  return parse_instance(is);
}

}  // namespace lotus::smip
