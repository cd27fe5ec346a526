#pragma once

#include "crn/dsl.hpp"
#include "crn/ratfunc.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crn::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Model load_model(const std::string& name) {
  auto res = parse_network(read_file(std::string(CRN_DATA_DIR) + "/" + name));
  if (!res.ok()) {
    std::string msg = "parse failed for " + name + ":";
    for (auto& d : res.diagnostics) msg += "\n  " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*res.model);
}

inline ExprPtr expr_of(Model& m, const std::string& text) {
  auto r = parse_expression(text, m);
  if (!r.expr) {
    std::string msg = "expression parse failed: " + text;
    for (auto& d : r.diagnostics) msg += "\n  " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return r.expr;
}

// Equality as rational functions (cross-multiplied, exact).
inline bool ratfunc_equal(const ExprPtr& a, const ExprPtr& b) {
  auto ra = expr_to_ratfunc(a);
  auto rb = expr_to_ratfunc(b);
  if (!ra || !rb) return false;
  return ra->equal(*rb);
}

inline std::vector<int> all_reactions(const Network& net) {
  std::vector<int> out(net.num_reactions());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (int)i;
  return out;
}

} // namespace crn::test
