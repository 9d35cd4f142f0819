#include "jumpmet/io.hpp"

#include <cstdio>
#include <ostream>

namespace jumpmet {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pairs_csv(std::ostream& os, const std::string& header_a,
                     const std::string& header_b,
                     const std::vector<std::pair<double, double>>& rows) {
  os << header_a << "," << header_b << "\n";
  for (const auto& [a, b] : rows) {
    os << g17(a) << "," << g17(b) << "\n";
  }
}

}  // namespace jumpmet
