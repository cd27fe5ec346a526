#pragma once

#include "crn/polynomial.hpp"

#include <optional>

namespace crn {

// Quotient of two polynomials. Kept lightly normalized: common rational and
// monomial content stripped, exact-division collapses applied, denominator
// leading coefficient positive. Equality is decided by cross-multiplication,
// so incomplete cancellation is harmless.
class RatFunc {
public:
  RatFunc() : num_(Rat(0)), den_(Rat(1)) {}
  explicit RatFunc(Poly n) : num_(std::move(n)), den_(Rat(1)) {}
  RatFunc(Poly n, Poly d);
  static RatFunc constant(const Rat& c) { return RatFunc(Poly(c)); }
  static RatFunc var(SymId v) { return RatFunc(Poly::var(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc pow(long long e) const;
  RatFunc inverse() const;

  bool equal(const RatFunc& o) const;  // as rational functions

  double eval(const std::vector<double>& env) const;
  ExprPtr to_expr() const;
  std::string str(const SymbolTable& tab) const;
  void collect_vars(std::set<SymId>& out) const;

private:
  Poly num_, den_;
  void normalize();
};

// Substitute var -> rf inside p; exact.
RatFunc poly_substitute(const Poly& p, SymId var, const RatFunc& rf);

// Expr -> RatFunc when the tree uses only integer literal exponents.
std::optional<RatFunc> expr_to_ratfunc(const ExprPtr& e);

} // namespace crn
