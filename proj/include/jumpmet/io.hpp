#ifndef JUMPMET_IO_HPP
#define JUMPMET_IO_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace jumpmet {

// Shortest round-trippable decimal form (17 significant digits).
std::string g17(double v);

// Two-column CSV with LF line endings.
void write_pairs_csv(std::ostream& os, const std::string& header_a,
                     const std::string& header_b,
                     const std::vector<std::pair<double, double>>& rows);

}  // namespace jumpmet

#endif
