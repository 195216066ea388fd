#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tmkbench/text.hpp"

namespace test_util {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string golden(const std::string& name) {
  return read_file(std::string(TMKBENCH_GOLDEN_DIR) + "/" + name);
}

// First line where the blank-normalized texts diverge; empty when equal.
inline std::string first_diff(const std::string& got, const std::string& want) {
  auto g = tmkbench::text::split_lines(tmkbench::text::normalize_blank_lines(got));
  auto w = tmkbench::text::split_lines(tmkbench::text::normalize_blank_lines(want));
  for (std::size_t i = 0; i < g.size() || i < w.size(); ++i) {
    std::string gl = i < g.size() ? g[i] : "<missing>";
    std::string wl = i < w.size() ? w[i] : "<missing>";
    if (gl != wl) {
      return "line " + std::to_string(i + 1) + ":\n  got:  " + gl + "\n  want: " + wl;
    }
  }
  return {};
}

}  // namespace test_util
