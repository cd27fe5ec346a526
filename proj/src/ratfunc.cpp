#include "crn/ratfunc.hpp"

#include <stdexcept>

namespace crn {

RatFunc::RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rat(1));
    return;
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(Rat(1) / den_.constant_value());
    den_ = Poly(Rat(1));
    return;
  }
  if (auto q = num_.divide_exact(den_)) {
    num_ = std::move(*q);
    den_ = Poly(Rat(1));
    return;
  }
  if (auto q = den_.divide_exact(num_)) {
    // num/den = 1 / (den/num)
    den_ = std::move(*q);
    num_ = Poly(Rat(1));
  }
  // strip shared monomial/rational content by normalizing each side and
  // rescaling so that the denominator's leading coefficient is 1
  Poly n = num_, d = den_;
  n.remove_content();
  d.remove_content();
  // only adopt content-stripped forms if they divide the originals consistently:
  // num = a*n, den = b*d with scalars a,b (monomial parts may differ; keep those)
  // Simpler: divide both by the shared monomial gcd and scalar.
  {
    auto shared_mono = [](const Poly& p, const Poly& q) {
      // gcd of the two monomial contents
      auto content_of = [](const Poly& p) {
        Mono common = p.terms().front().m;
        for (auto& t : p.terms()) {
          Mono next;
          std::size_t i = 0, j = 0;
          auto& a = common.factors;
          auto& b = t.m.factors;
          while (i < a.size() && j < b.size()) {
            if (a[i].first < b[j].first) ++i;
            else if (b[j].first < a[i].first) ++j;
            else {
              next.factors.push_back({a[i].first, std::min(a[i].second, b[j].second)});
              ++i;
              ++j;
            }
          }
          common = std::move(next);
          if (common.factors.empty()) break;
        }
        return common;
      };
      Mono cp = content_of(p), cq = content_of(q);
      Mono g;
      std::size_t i = 0, j = 0;
      while (i < cp.factors.size() && j < cq.factors.size()) {
        if (cp.factors[i].first < cq.factors[j].first) ++i;
        else if (cq.factors[j].first < cp.factors[i].first) ++j;
        else {
          g.factors.push_back(
              {cp.factors[i].first, std::min(cp.factors[i].second, cq.factors[j].second)});
          ++i;
          ++j;
        }
      }
      return g;
    };
    Mono g = shared_mono(num_, den_);
    if (!g.factors.empty()) {
      Poly gp;
      gp = Poly::var(g.factors[0].first, g.factors[0].second);
      for (std::size_t i = 1; i < g.factors.size(); ++i)
        gp = gp * Poly::var(g.factors[i].first, g.factors[i].second);
      num_ = *num_.divide_exact(gp);
      den_ = *den_.divide_exact(gp);
    }
  }
  Rat lead = den_.leading().c;
  num_ = num_.scaled(Rat(1) / lead);
  den_ = den_.scaled(Rat(1) / lead);
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_.equal(o.den_)) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  // cross-cancel cheaply before multiplying
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero rational function");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(long long e) const {
  if (e == 0) return RatFunc(Poly(Rat(1)));
  RatFunc b = e > 0 ? *this : inverse();
  unsigned long long n = e > 0 ? (unsigned long long)e : (unsigned long long)(-e);
  RatFunc acc(Poly(Rat(1)));
  while (n) {
    if (n & 1) acc = acc * b;
    b = b * b;
    n >>= 1;
  }
  return acc;
}

bool RatFunc::equal(const RatFunc& o) const { return (num_ * o.den_).equal(o.num_ * den_); }

double RatFunc::eval(const std::vector<double>& env) const {
  double d = den_.eval(env);
  if (d == 0) throw EvalError("rational function denominator evaluated to zero");
  return num_.eval(env) / d;
}

ExprPtr RatFunc::to_expr() const {
  if (is_polynomial()) return num_.to_expr();
  return Expr::div(num_.to_expr(), den_.to_expr());
}

std::string RatFunc::str(const SymbolTable& tab) const { return to_string(to_expr(), tab); }

void RatFunc::collect_vars(std::set<SymId>& out) const {
  num_.collect_vars(out);
  den_.collect_vars(out);
}

RatFunc poly_substitute(const Poly& p, SymId var, const RatFunc& rf) {
  std::uint32_t deg = p.degree_in(var);
  if (deg == 0) return RatFunc(p);
  // p = sum_k C_k * var^k  ->  sum_k C_k * num^k * den^(deg-k) / den^deg
  Poly acc;
  for (std::uint32_t k = 0; k <= deg; ++k) {
    Poly ck = p.coeff_of(var, k);
    if (ck.is_zero()) continue;
    acc = acc + ck * rf.num().pow(k) * rf.den().pow(deg - k);
  }
  return RatFunc(std::move(acc), rf.den().pow(deg));
}

std::optional<RatFunc> expr_to_ratfunc(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Num:
      return RatFunc(Poly(e->value));
    case ExprKind::Sym:
      return RatFunc::var(e->sym);
    case ExprKind::Add: {
      RatFunc acc;
      for (auto& a : e->args) {
        auto r = expr_to_ratfunc(a);
        if (!r) return std::nullopt;
        acc = acc + *r;
      }
      return acc;
    }
    case ExprKind::Mul: {
      RatFunc acc(Poly(Rat(1)));
      for (auto& a : e->args) {
        auto r = expr_to_ratfunc(a);
        if (!r) return std::nullopt;
        acc = acc * *r;
      }
      return acc;
    }
    case ExprKind::Pow: {
      if (!e->expo->is_num() || !is_integer(e->expo->value)) return std::nullopt;
      auto b = expr_to_ratfunc(e->base);
      if (!b) return std::nullopt;
      long long k = numerator(e->expo->value).convert_to<long long>();
      if (b->is_zero() && k < 0) return std::nullopt;
      return b->pow(k);
    }
  }
  return std::nullopt;
}

} // namespace crn
