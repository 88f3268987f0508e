#pragma once

#include <iosfwd>
#include <string>

#include "fbmlab/fbm.hpp"

namespace fbmlab::io {

// Shortest round-trip decimal form of x ("nan"/"inf" for specials).
std::string format_double(double x);

// CSV with header "t,value", one node per row, 17 significant digits.
void write_path_csv(std::ostream& out, const SamplePath& path);
void write_path_csv(const std::string& filename, const SamplePath& path);

// Reads the path CSV format back.  Unopenable files raise IoError; malformed
// content (bad header, non-numeric fields, non-uniform times, fewer than two
// rows) raises DomainError.
SamplePath read_path_csv(std::istream& in, const std::string& name = "<stream>");
SamplePath read_path_csv(const std::string& filename);

}  // namespace fbmlab::io
