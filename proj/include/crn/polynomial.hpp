#pragma once

#include "crn/expr.hpp"
#include "crn/rational.hpp"
#include "crn/symtab.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace crn {

// Exponent vector, sparse, sorted by SymId, exponents > 0.
struct Mono {
  std::vector<std::pair<SymId, std::uint32_t>> factors;

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (auto& [v, e] : factors) d += e;
    return d;
  }
  bool operator==(const Mono& o) const { return factors == o.factors; }
};

// Graded lexicographic order (compatible with multiplication).
bool mono_less(const Mono& a, const Mono& b);
Mono mono_mul(const Mono& a, const Mono& b);
// a / b, or nullopt when b does not divide a.
std::optional<Mono> mono_div(const Mono& a, const Mono& b);

// Sparse multivariate polynomial with exact rational coefficients.
// Terms kept sorted leading-first (descending grlex); no zero coefficients.
class Poly {
public:
  struct Term {
    Mono m;
    Rat c;
  };

  Poly() = default;
  explicit Poly(Rat c);
  static Poly var(SymId v, std::uint32_t e = 1);
  static Poly constant(long long c) { return Poly(Rat(c)); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.factors.empty()); }
  Rat constant_value() const;  // requires is_constant()
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Rat& c) const;
  Poly pow(std::uint32_t e) const;
  bool operator==(const Poly& o) const { return equal(o); }
  bool equal(const Poly& o) const;

  // Exact division; nullopt when the division leaves a remainder.
  std::optional<Poly> divide_exact(const Poly& d) const;

  std::uint32_t degree_in(SymId v) const;
  // Polynomial coefficient of v^k (a polynomial in the remaining variables).
  Poly coeff_of(SymId v, std::uint32_t k) const;
  bool contains_var(SymId v) const { return degree_in(v) > 0; }
  void collect_vars(std::set<SymId>& out) const;

  bool all_coeffs_positive() const;
  // gcd of rational coefficients times the common monomial factor
  void remove_content();

  double eval(const std::vector<double>& env) const;
  ExprPtr to_expr() const;
  std::string str(const SymbolTable& tab) const;

  // Build from terms; merges duplicates, drops zeros.
  static Poly from_terms(std::vector<Term> ts);

private:
  std::vector<Term> terms_;
};

Poly poly_from_symbol_product(const std::vector<SymId>& syms);

} // namespace crn
