#pragma once

#include <iosfwd>
#include <string>

#include "lotus/smip/production.hpp"

namespace lotus::smip {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Versioned structured-text instance format. Doubles are printed with 17
// significant digits so parse(serialize(p)) round-trips bit-exactly.
void serialize_instance(const ProductionInstance& inst, std::ostream& os);
ProductionInstance parse_instance(std::istream& is);

void save_instance(const ProductionInstance& inst, const std::string& path);
ProductionInstance load_instance(const std::string& path);

}  // namespace lotus::smip
