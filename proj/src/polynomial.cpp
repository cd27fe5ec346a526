#include "crn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crn {

bool mono_less(const Mono& a, const Mono& b) {
  std::uint64_t da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  // lex on ascending variable ids: larger exponent on smaller id wins
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    auto [va, ea] = a.factors[i];
    auto [vb, eb] = b.factors[j];
    if (va != vb) return va > vb;  // b has the smaller variable -> b larger
    if (ea != eb) return ea < eb;
    ++i;
    ++j;
  }
  return a.factors.size() < b.factors.size() && false;  // equal prefixes, same degree -> equal
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  r.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      r.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
      r.factors.push_back(b.factors[j++]);
    } else {
      r.factors.push_back({a.factors[i].first, a.factors[i].second + b.factors[j].second});
      ++i;
      ++j;
    }
  }
  return r;
}

std::optional<Mono> mono_div(const Mono& a, const Mono& b) {
  Mono r;
  std::size_t i = 0;
  for (auto& [v, e] : b.factors) {
    while (i < a.factors.size() && a.factors[i].first < v) r.factors.push_back(a.factors[i++]);
    if (i == a.factors.size() || a.factors[i].first != v || a.factors[i].second < e)
      return std::nullopt;
    if (a.factors[i].second > e) r.factors.push_back({v, a.factors[i].second - e});
    ++i;
  }
  while (i < a.factors.size()) r.factors.push_back(a.factors[i++]);
  return r;
}

namespace {
struct MonoCmpDesc {
  bool operator()(const Mono& a, const Mono& b) const { return mono_less(b, a); }
};
} // namespace

Poly::Poly(Rat c) {
  if (c != 0) terms_.push_back({Mono{}, std::move(c)});
}

Poly Poly::var(SymId v, std::uint32_t e) {
  Poly p;
  if (e == 0) return Poly(Rat(1));
  p.terms_.push_back({Mono{{{v, e}}}, Rat(1)});
  return p;
}

Rat Poly::constant_value() const {
  if (terms_.empty()) return Rat(0);
  return terms_[0].c;
}

Poly Poly::from_terms(std::vector<Term> ts) {
  std::map<Mono, Rat, MonoCmpDesc> acc;
  for (auto& t : ts) {
    if (t.c == 0) continue;
    auto [it, fresh] = acc.emplace(std::move(t.m), t.c);
    if (!fresh) {
      it->second += t.c;
      if (it->second == 0) acc.erase(it);
    }
  }
  Poly p;
  p.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Term> ts;
  ts.reserve(terms_.size() + o.terms_.size());
  ts.insert(ts.end(), terms_.begin(), terms_.end());
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(ts));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.c = -t.c;
  return p;
}

Poly Poly::scaled(const Rat& c) const {
  if (c == 0) return Poly();
  Poly p = *this;
  for (auto& t : p.terms_) t.c *= c;
  return p;
}

Poly Poly::operator*(const Poly& o) const {
  std::map<Mono, Rat, MonoCmpDesc> acc;
  for (auto& a : terms_)
    for (auto& b : o.terms_) {
      Mono m = mono_mul(a.m, b.m);
      Rat c = a.c * b.c;
      auto [it, fresh] = acc.emplace(std::move(m), c);
      if (!fresh) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
      }
    }
  Poly p;
  p.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::pow(std::uint32_t e) const {
  Poly acc(Rat(1));
  Poly b = *this;
  while (e) {
    if (e & 1) acc = acc * b;
    if (e >>= 1) b = b * b;
  }
  return acc;
}

bool Poly::equal(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].m == o.terms_[i].m) || terms_[i].c != o.terms_[i].c) return false;
  return true;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) return std::nullopt;
  Poly rem = *this;
  std::vector<Term> quot;
  while (!rem.is_zero()) {
    auto m = mono_div(rem.leading().m, d.leading().m);
    if (!m) return std::nullopt;
    Rat c = rem.leading().c / d.leading().c;
    Term t{*m, c};
    // rem -= t * d
    std::vector<Term> sub;
    sub.reserve(d.terms_.size());
    for (auto& dt : d.terms_) sub.push_back({mono_mul(dt.m, t.m), -dt.c * c});
    std::vector<Term> merged;
    merged.reserve(rem.terms_.size() + sub.size());
    merged.insert(merged.end(), rem.terms_.begin(), rem.terms_.end());
    merged.insert(merged.end(), sub.begin(), sub.end());
    rem = from_terms(std::move(merged));
    quot.push_back(std::move(t));
  }
  return from_terms(std::move(quot));
}

std::uint32_t Poly::degree_in(SymId v) const {
  std::uint32_t d = 0;
  for (auto& t : terms_)
    for (auto& [var, e] : t.m.factors)
      if (var == v) d = std::max(d, e);
  return d;
}

Poly Poly::coeff_of(SymId v, std::uint32_t k) const {
  std::vector<Term> ts;
  for (auto& t : terms_) {
    std::uint32_t e = 0;
    Mono rest;
    for (auto& [var, ex] : t.m.factors) {
      if (var == v) e = ex;
      else rest.factors.push_back({var, ex});
    }
    if (e == k) ts.push_back({std::move(rest), t.c});
  }
  return from_terms(std::move(ts));
}

void Poly::collect_vars(std::set<SymId>& out) const {
  for (auto& t : terms_)
    for (auto& [v, e] : t.m.factors) out.insert(v);
}

bool Poly::all_coeffs_positive() const {
  for (auto& t : terms_)
    if (t.c <= 0) return false;
  return !terms_.empty();
}

void Poly::remove_content() {
  if (terms_.empty()) return;
  // rational content
  BigInt gnum = 0, glden = 1;
  for (auto& t : terms_) gnum = gcd(gnum, numerator(t.c));
  for (auto& t : terms_) glden = lcm(glden, denominator(t.c));
  Rat content(gnum, glden);
  if (terms_[0].c < 0) content = -content;
  // common monomial factor
  Mono common = terms_[0].m;
  for (auto& t : terms_) {
    Mono next;
    std::size_t i = 0, j = 0;
    while (i < common.factors.size() && j < t.m.factors.size()) {
      if (common.factors[i].first < t.m.factors[j].first) ++i;
      else if (t.m.factors[j].first < common.factors[i].first) ++j;
      else {
        next.factors.push_back(
            {common.factors[i].first, std::min(common.factors[i].second, t.m.factors[j].second)});
        ++i;
        ++j;
      }
    }
    common = std::move(next);
    if (common.factors.empty()) break;
  }
  for (auto& t : terms_) {
    t.c /= content;
    t.m = *mono_div(t.m, common);
  }
  // re-sort in case the monomial order shifted after factor removal
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return mono_less(b.m, a.m); });
}

double Poly::eval(const std::vector<double>& env) const {
  double s = 0;
  for (auto& t : terms_) {
    double p = to_double(t.c);
    for (auto& [v, e] : t.m.factors) {
      if (v >= env.size() || std::isnan(env[v])) throw UnboundSymbolError(v);
      p *= std::pow(env[v], (double)e);
    }
    s += p;
  }
  return s;
}

ExprPtr Poly::to_expr() const {
  if (terms_.empty()) return Expr::num(0);
  std::vector<ExprPtr> sum;
  for (auto& t : terms_) {
    std::vector<ExprPtr> prod;
    if (t.c != 1 || t.m.factors.empty()) prod.push_back(Expr::num(t.c));
    for (auto& [v, e] : t.m.factors)
      prod.push_back(e == 1 ? Expr::symbol(v) : Expr::pow(Expr::symbol(v), Rat(e)));
    sum.push_back(Expr::mul(std::move(prod)));
  }
  return Expr::add(std::move(sum));
}

std::string Poly::str(const SymbolTable& tab) const { return to_string(to_expr(), tab); }

Poly poly_from_symbol_product(const std::vector<SymId>& syms) {
  Poly p(Rat(1));
  for (SymId s : syms) p = p * Poly::var(s);
  return p;
}

} // namespace crn
