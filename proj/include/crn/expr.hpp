#pragma once

#include "crn/rational.hpp"
#include "crn/symtab.hpp"

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace crn {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind : std::uint8_t { Num, Sym, Add, Mul, Pow };

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundSymbolError : EvalError {
  SymId sym;
  explicit UnboundSymbolError(SymId s)
      : EvalError("unbound symbol in expression"), sym(s) {}
};

// Immutable expression tree over symbols, rational literals and {+,-,*,/,^}.
// Subtraction is Add with a negative coefficient, division is Pow(x, -1).
// Construction folds numeric subterms but never cancels symbolic ones.
struct Expr {
  ExprKind kind;
  Rat value;                  // Num
  SymId sym = kNoSym;         // Sym
  std::vector<ExprPtr> args;  // Add, Mul
  ExprPtr base, expo;         // Pow

  static ExprPtr num(Rat v);
  static ExprPtr num(long long v) { return num(Rat(v)); }
  static ExprPtr symbol(SymId s);
  static ExprPtr add(std::vector<ExprPtr> terms);
  static ExprPtr mul(std::vector<ExprPtr> factors);
  static ExprPtr pow(ExprPtr b, ExprPtr e);
  static ExprPtr pow(ExprPtr b, Rat e) { return pow(std::move(b), num(std::move(e))); }
  static ExprPtr div(ExprPtr a, ExprPtr b);
  static ExprPtr sub(ExprPtr a, ExprPtr b);
  static ExprPtr neg(ExprPtr a);

  bool is_num() const { return kind == ExprKind::Num; }
  bool is_num(const Rat& v) const { return kind == ExprKind::Num && value == v; }
  bool is_sym() const { return kind == ExprKind::Sym; }

  double eval(const std::vector<double>& env) const;
  void collect_symbols(std::set<SymId>& out) const;
  std::set<SymId> symbols() const {
    std::set<SymId> s;
    collect_symbols(s);
    return s;
  }
  bool contains(SymId s) const;
  ExprPtr self() const;  // shared_from_this without enable_shared (nodes are built via factories)
};

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

ExprPtr substitute(const ExprPtr& e, const std::unordered_map<SymId, ExprPtr>& map);

std::string to_string(const ExprPtr& e, const SymbolTable& tab);

// Splits a flattened sum into its top-level terms (a non-Add expression is a
// single term).
std::vector<ExprPtr> additive_terms(const ExprPtr& e);

// coeff * prod sym^exp with rational literal exponents, or nullopt.
struct MonomialView {
  Rat coeff;
  std::vector<std::pair<SymId, Rat>> powers;  // sorted by SymId, merged
};
std::optional<MonomialView> as_monomial(const ExprPtr& e);

// True when the expression is a sum/product/power of strictly positive pieces
// given that every symbol ranges over positive reals. A certificate in the
// syntactic sense; returns false on anything containing a negative literal or
// a subtraction that is not obviously positive.
bool positivity_certified(const ExprPtr& e);

// f restricted to the symbol s: f == coeff_linear * s + rest with both parts
// free of s. Fails (nullopt) when s occurs nonlinearly or inside an opaque
// subexpression (e.g. a power or quotient denominator).
struct LinearSplit {
  ExprPtr coeff;  // may be a sum
  ExprPtr rest;
};
std::optional<LinearSplit> split_linear(const ExprPtr& e, SymId s);

} // namespace crn
