#include "fbmlab/path_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fbmlab::io {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_field(const std::string& field, std::size_t line_no, const std::string& name) {
  const std::string text = strip(field);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    std::ostringstream msg;
    msg << name << ": line " << line_no << ": expected a number, got '" << text << "'";
    throw DomainError(msg.str());
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out << "t,value\n";
  char line[96];
  const UniformGrid& grid = path.grid();
  for (std::size_t k = 0; k <= grid.n(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", grid.point(k), path.value(k));
    out << line;
  }
  if (!out) throw IoError("failed while writing path CSV");
}

void write_path_csv(const std::string& filename, const SamplePath& path) {
  std::ofstream out(filename);
  if (!out) throw IoError("cannot open '" + filename + "' for writing");
  write_path_csv(out, path);
  out.flush();
  if (!out) throw IoError("failed while writing '" + filename + "'");
}

SamplePath read_path_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError(name + ": empty input");
  if (strip(line) != "t,value") {
    throw DomainError(name + ": expected header 't,value', got '" + strip(line) + "'");
  }
  std::vector<double> times;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = strip(line);
    if (text.empty()) continue;
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
      std::ostringstream msg;
      msg << name << ": line " << line_no << ": expected 't,value'";
      throw DomainError(msg.str());
    }
    times.push_back(parse_field(text.substr(0, comma), line_no, name));
    values.push_back(parse_field(text.substr(comma + 1), line_no, name));
  }
  if (times.size() < 2) throw DomainError(name + ": need at least two rows (t = 0 and t = T)");
  const std::size_t n = times.size() - 1;
  const double horizon = times.back();
  if (!(horizon > 0.0)) throw DomainError(name + ": final time must be positive");
  const double tol = 1e-9 * std::max(1.0, horizon);
  if (std::abs(times.front()) > tol) throw DomainError(name + ": first time must be 0");
  for (std::size_t k = 0; k <= n; ++k) {
    const double expected = horizon * static_cast<double>(k) / static_cast<double>(n);
    if (std::abs(times[k] - expected) > tol) {
      std::ostringstream msg;
      msg << name << ": times are not a uniform grid (node " << k << ": " << times[k]
          << " vs " << expected << ")";
      throw DomainError(msg.str());
    }
  }
  return SamplePath(UniformGrid(n, horizon), std::move(values));
}

SamplePath read_path_csv(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw IoError("cannot open '" + filename + "' for reading");
  return read_path_csv(in, filename);
}

}  // namespace fbmlab::io
