#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lotus/dual/dual.hpp"

namespace lotus::dual {

class TraceParseError : public std::runtime_error {
 public:
  explicit TraceParseError(const std::string& what) : std::runtime_error(what) {}
};

void write_trace(const std::vector<IterationRecord>& trace, std::ostream& os);
std::vector<IterationRecord> read_trace(std::istream& is);

void save_trace(const std::vector<IterationRecord>& trace, const std::string& path);
std::vector<IterationRecord> load_trace(const std::string& path);

// Run summary: method name plus final bounds, gap, timings, and the
// incumbent first stage.
void write_summary(const RunResult& r, const std::string& method, std::ostream& os);

}  // namespace lotus::dual
