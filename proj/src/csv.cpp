#include "vbkreg/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vbkreg {

namespace {

double parse_number(const std::string& field, std::size_t line_no, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": malformed " + what +
                             " value '" + field + "'");
  }
  while (pos < field.size() && (field[pos] == ' ' || field[pos] == '\t' || field[pos] == '\r'))
    ++pos;
  if (pos != field.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": malformed " + what +
                             " value '" + field + "'");
  if (!std::isfinite(v))
    throw std::runtime_error("line " + std::to_string(line_no) + ": non-finite " + what +
                             " value");
  return v;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return s.substr(b);
}

}  // namespace

Sample load_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  ++line_no;
  if (strip(line) != "x,y")
    throw std::runtime_error(path + ": line 1: expected header 'x,y', got '" + strip(line) + "'");
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty()) continue;
    std::size_t c1 = s.find(',');
    if (c1 == std::string::npos)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 2 columns");
    if (s.find(',', c1 + 1) != std::string::npos)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": unexpected column");
    xs.push_back(parse_number(s.substr(0, c1), line_no, "x"));
    ys.push_back(parse_number(s.substr(c1 + 1), line_no, "y"));
  }
  if (xs.empty()) throw std::runtime_error(path + ": no data rows");
  return Sample(std::move(xs), std::move(ys));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace vbkreg
