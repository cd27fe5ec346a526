#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace crn {

using SymId = std::uint32_t;
inline constexpr SymId kNoSym = static_cast<SymId>(-1);

enum class SymKind : std::uint8_t {
  Parameter,     // rate constants and other sampled parameters
  Concentration, // species concentration
  NamedConstant, // alpha, beta, kbar, ktilde, ... (bound, not sampled)
  Sigma,         // phantom-edge free parameter
  Tau,           // kernel-basis free parameter
};

// Append-only interned symbol registry shared by a model and everything
// derived from it (translations, parametrizations, reports).
class SymbolTable {
public:
  SymId intern(const std::string& name, SymKind kind) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    SymId id = static_cast<SymId>(names_.size());
    names_.push_back(name);
    kinds_.push_back(kind);
    index_.emplace(name, id);
    return id;
  }

  SymId lookup(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? kNoSym : it->second;
  }

  const std::string& name(SymId id) const { return names_.at(id); }
  SymKind kind(SymId id) const { return kinds_.at(id); }
  void set_kind(SymId id, SymKind k) { kinds_.at(id) = k; }
  std::size_t size() const { return names_.size(); }

  SymId fresh(const std::string& prefix, SymKind kind) {
    for (int i = 1;; ++i) {
      std::string cand = prefix + std::to_string(i);
      if (index_.find(cand) == index_.end()) return intern(cand, kind);
    }
  }

private:
  std::vector<std::string> names_;
  std::vector<SymKind> kinds_;
  std::unordered_map<std::string, SymId> index_;
};

} // namespace crn
