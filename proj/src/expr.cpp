#include "crn/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace crn {

namespace {

ExprPtr make(Expr&& e) { return std::make_shared<Expr>(std::move(e)); }

Rat pow_rat(const Rat& base, long long e) {
  if (e == 0) return Rat(1);
  Rat b = base;
  bool inv = e < 0;
  unsigned long long n = inv ? -(unsigned long long)e : (unsigned long long)e;
  Rat acc(1);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  if (inv) {
    if (acc == 0) throw EvalError("0 raised to negative power");
    acc = Rat(1) / acc;
  }
  return acc;
}

} // namespace

ExprPtr Expr::num(Rat v) {
  Expr e;
  e.kind = ExprKind::Num;
  e.value = std::move(v);
  return make(std::move(e));
}

ExprPtr Expr::symbol(SymId s) {
  Expr e;
  e.kind = ExprKind::Sym;
  e.sym = s;
  return make(std::move(e));
}

ExprPtr Expr::add(std::vector<ExprPtr> terms) {
  std::vector<ExprPtr> flat;
  Rat c(0);
  for (auto& t : terms) {
    if (!t) throw std::logic_error("null expr");
    if (t->kind == ExprKind::Add) {
      for (auto& a : t->args) {
        if (a->is_num()) c += a->value;
        else flat.push_back(a);
      }
    } else if (t->is_num()) {
      c += t->value;
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (c != 0 || flat.empty()) flat.push_back(num(c));
  if (flat.size() == 1) return flat[0];
  Expr e;
  e.kind = ExprKind::Add;
  e.args = std::move(flat);
  return make(std::move(e));
}

ExprPtr Expr::mul(std::vector<ExprPtr> factors) {
  std::vector<ExprPtr> flat;
  Rat c(1);
  for (auto& f : factors) {
    if (!f) throw std::logic_error("null expr");
    if (f->kind == ExprKind::Mul) {
      for (auto& a : f->args) {
        if (a->is_num()) c *= a->value;
        else flat.push_back(a);
      }
    } else if (f->is_num()) {
      c *= f->value;
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (c == 0) return num(Rat(0));
  if (flat.empty()) return num(c);
  if (c != 1) flat.insert(flat.begin(), num(c));
  if (flat.size() == 1) return flat[0];
  Expr e;
  e.kind = ExprKind::Mul;
  e.args = std::move(flat);
  return make(std::move(e));
}

ExprPtr Expr::pow(ExprPtr b, ExprPtr e) {
  if (!b || !e) throw std::logic_error("null expr");
  if (e->is_num(Rat(1))) return b;
  if (e->is_num(Rat(0))) return num(Rat(1));
  if (b->is_num(Rat(1))) return b;
  if (b->is_num() && e->is_num() && is_integer(e->value)) {
    const BigInt& n = numerator(e->value);
    if (n >= -64 && n <= 64) return num(pow_rat(b->value, n.convert_to<long long>()));
  }
  if (b->kind == ExprKind::Pow && b->expo->is_num() && e->is_num())
    return pow(b->base, num(b->expo->value * e->value));
  Expr r;
  r.kind = ExprKind::Pow;
  r.base = std::move(b);
  r.expo = std::move(e);
  return make(std::move(r));
}

ExprPtr Expr::div(ExprPtr a, ExprPtr b) {
  if (b->is_num()) {
    if (b->value == 0) throw EvalError("division by zero literal");
    return mul({std::move(a), num(Rat(1) / b->value)});
  }
  return mul({std::move(a), pow(std::move(b), num(Rat(-1)))});
}

ExprPtr Expr::sub(ExprPtr a, ExprPtr b) { return add({std::move(a), neg(std::move(b))}); }

ExprPtr Expr::neg(ExprPtr a) { return mul({num(Rat(-1)), std::move(a)}); }

double Expr::eval(const std::vector<double>& env) const {
  switch (kind) {
    case ExprKind::Num:
      return to_double(value);
    case ExprKind::Sym: {
      if (sym >= env.size() || std::isnan(env[sym])) throw UnboundSymbolError(sym);
      return env[sym];
    }
    case ExprKind::Add: {
      double s = 0;
      for (auto& a : args) s += a->eval(env);
      return s;
    }
    case ExprKind::Mul: {
      double p = 1;
      for (auto& a : args) p *= a->eval(env);
      return p;
    }
    case ExprKind::Pow: {
      double b = base->eval(env);
      double e = expo->eval(env);
      if (b == 0.0 && e < 0) throw EvalError("zero denominator");
      double r = std::pow(b, e);
      if (!std::isfinite(r)) throw EvalError("non-finite power result");
      return r;
    }
  }
  throw std::logic_error("bad expr kind");
}

void Expr::collect_symbols(std::set<SymId>& out) const {
  switch (kind) {
    case ExprKind::Num: return;
    case ExprKind::Sym: out.insert(sym); return;
    case ExprKind::Add:
    case ExprKind::Mul:
      for (auto& a : args) a->collect_symbols(out);
      return;
    case ExprKind::Pow:
      base->collect_symbols(out);
      expo->collect_symbols(out);
      return;
  }
}

bool Expr::contains(SymId s) const {
  switch (kind) {
    case ExprKind::Num: return false;
    case ExprKind::Sym: return sym == s;
    case ExprKind::Add:
    case ExprKind::Mul:
      for (auto& a : args)
        if (a->contains(s)) return true;
      return false;
    case ExprKind::Pow: return base->contains(s) || expo->contains(s);
  }
  return false;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Num: return a->value == b->value;
    case ExprKind::Sym: return a->sym == b->sym;
    case ExprKind::Add:
    case ExprKind::Mul: {
      if (a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!structurally_equal(a->args[i], b->args[i])) return false;
      return true;
    }
    case ExprKind::Pow:
      return structurally_equal(a->base, b->base) && structurally_equal(a->expo, b->expo);
  }
  return false;
}

ExprPtr substitute(const ExprPtr& e, const std::unordered_map<SymId, ExprPtr>& map) {
  switch (e->kind) {
    case ExprKind::Num: return e;
    case ExprKind::Sym: {
      auto it = map.find(e->sym);
      return it == map.end() ? e : it->second;
    }
    case ExprKind::Add:
    case ExprKind::Mul: {
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      bool changed = false;
      for (auto& a : e->args) {
        auto r = substitute(a, map);
        changed |= (r.get() != a.get());
        args.push_back(std::move(r));
      }
      if (!changed) return e;
      return e->kind == ExprKind::Add ? Expr::add(std::move(args)) : Expr::mul(std::move(args));
    }
    case ExprKind::Pow: {
      auto b = substitute(e->base, map);
      auto x = substitute(e->expo, map);
      if (b.get() == e->base.get() && x.get() == e->expo.get()) return e;
      return Expr::pow(std::move(b), std::move(x));
    }
  }
  throw std::logic_error("bad expr kind");
}

namespace {

// precedence: Add=1, Mul=2, unary minus=2.5-ish, Pow=3, atom=4
void print(const ExprPtr& e, const SymbolTable& tab, int parent_prec, std::ostream& os);

void print_mul(const std::vector<ExprPtr>& factors, const SymbolTable& tab, std::ostream& os) {
  // split into numerator and denominator factors for readable quotients
  std::vector<ExprPtr> numf, denf;
  Rat coeff(1);
  for (auto& f : factors) {
    if (f->is_num()) {
      coeff *= f->value;
      continue;
    }
    if (f->kind == ExprKind::Pow && f->expo->is_num() && f->expo->value < 0) {
      Rat flipped = -f->expo->value;
      denf.push_back(flipped == 1 ? f->base : Expr::pow(f->base, flipped));
    } else {
      numf.push_back(f);
    }
  }
  bool neg = coeff < 0;
  if (neg) coeff = -coeff;
  if (neg) os << "-";
  bool coeff_shown = false;
  if (coeff != 1 || numf.empty()) {
    os << rat_str(numerator(coeff));
    coeff_shown = true;
  }
  bool first = !coeff_shown;
  for (auto& f : numf) {
    if (!first) os << "*";
    first = false;
    print(f, tab, 2, os);
  }
  if (denominator(coeff) != 1) {
    denf.insert(denf.begin(), Expr::num(Rat(denominator(coeff))));
  }
  if (!denf.empty()) {
    os << "/";
    if (denf.size() == 1 && denf[0]->kind != ExprKind::Add && denf[0]->kind != ExprKind::Mul) {
      print(denf[0], tab, 3, os);
    } else {
      os << "(";
      bool f1 = true;
      for (auto& f : denf) {
        if (!f1) os << "*";
        f1 = false;
        print(f, tab, 2, os);
      }
      os << ")";
    }
  }
}

void print(const ExprPtr& e, const SymbolTable& tab, int parent_prec, std::ostream& os) {
  switch (e->kind) {
    case ExprKind::Num: {
      bool neg = e->value < 0;
      bool frac = denominator(e->value) != 1;
      bool need = (neg || frac) && parent_prec >= 2;
      if (need) os << "(";
      os << rat_str(e->value);
      if (need) os << ")";
      return;
    }
    case ExprKind::Sym:
      os << tab.name(e->sym);
      return;
    case ExprKind::Add: {
      bool need = parent_prec >= 2;
      if (need) os << "(";
      bool first = true;
      for (auto& a : e->args) {
        // fold a leading negative coefficient into " - "
        bool negterm = false;
        ExprPtr t = a;
        if (a->kind == ExprKind::Mul && !a->args.empty() && a->args[0]->is_num() &&
            a->args[0]->value < 0) {
          std::vector<ExprPtr> fl = a->args;
          fl[0] = Expr::num(-fl[0]->value);
          t = Expr::mul(std::move(fl));
          negterm = true;
        } else if (a->is_num() && a->value < 0) {
          t = Expr::num(-a->value);
          negterm = true;
        }
        if (first) {
          if (negterm) os << "-";
        } else {
          os << (negterm ? " - " : " + ");
        }
        first = false;
        print(t, tab, 1, os);
      }
      if (need) os << ")";
      return;
    }
    case ExprKind::Mul: {
      bool need = parent_prec >= 3;
      if (need) os << "(";
      print_mul(e->args, tab, os);
      if (need) os << ")";
      return;
    }
    case ExprKind::Pow: {
      if (e->expo->is_num() && e->expo->value == -1) {
        os << "1/";
        print(e->base, tab, 4, os);
        return;
      }
      print(e->base, tab, 4, os);
      os << "^";
      print(e->expo, tab, 4, os);
      return;
    }
  }
}

} // namespace

std::string to_string(const ExprPtr& e, const SymbolTable& tab) {
  std::ostringstream os;
  print(e, tab, 0, os);
  return os.str();
}

std::vector<ExprPtr> additive_terms(const ExprPtr& e) {
  if (e->kind == ExprKind::Add) return e->args;
  return {e};
}

std::optional<MonomialView> as_monomial(const ExprPtr& e) {
  MonomialView mv;
  mv.coeff = Rat(1);
  std::map<SymId, Rat> pw;
  std::vector<std::pair<ExprPtr, Rat>> stack{{e, Rat(1)}};
  while (!stack.empty()) {
    auto [cur, mult] = stack.back();
    stack.pop_back();
    switch (cur->kind) {
      case ExprKind::Num: {
        if (mult == 1) mv.coeff *= cur->value;
        else if (is_integer(mult)) {
          if (cur->value == 0) return std::nullopt;
          mv.coeff *= pow_rat(cur->value, numerator(mult).convert_to<long long>());
        } else return std::nullopt;
        break;
      }
      case ExprKind::Sym:
        pw[cur->sym] += mult;
        break;
      case ExprKind::Mul:
        for (auto& a : cur->args) stack.push_back({a, mult});
        break;
      case ExprKind::Pow: {
        if (!cur->expo->is_num()) return std::nullopt;
        stack.push_back({cur->base, mult * cur->expo->value});
        break;
      }
      case ExprKind::Add:
        return std::nullopt;
    }
  }
  for (auto& [s, r] : pw)
    if (r != 0) mv.powers.emplace_back(s, r);
  return mv;
}

bool positivity_certified(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Num: return e->value > 0;
    case ExprKind::Sym: return true;  // all symbols range over positive reals
    case ExprKind::Add:
    case ExprKind::Mul:
      for (auto& a : e->args)
        if (!positivity_certified(a)) return false;
      return true;
    case ExprKind::Pow:
      // positive base to any real power stays positive; exponent sign is free
      return positivity_certified(e->base);
  }
  return false;
}

std::optional<LinearSplit> split_linear(const ExprPtr& e, SymId s) {
  std::vector<ExprPtr> coeff_terms, rest_terms;
  for (auto& t : additive_terms(e)) {
    if (!t->contains(s)) {
      rest_terms.push_back(t);
      continue;
    }
    // t must be a product with exactly one bare factor == s, everything else s-free
    std::vector<ExprPtr> others;
    int count = 0;
    if (t->is_sym() && t->sym == s) {
      count = 1;
    } else if (t->kind == ExprKind::Mul) {
      for (auto& f : t->args) {
        if (f->is_sym() && f->sym == s) {
          ++count;
          continue;
        }
        if (f->contains(s)) return std::nullopt;
        others.push_back(f);
      }
    } else {
      return std::nullopt;
    }
    if (count != 1) return std::nullopt;
    coeff_terms.push_back(others.empty() ? Expr::num(1) : Expr::mul(std::move(others)));
  }
  if (coeff_terms.empty()) return std::nullopt;
  return LinearSplit{Expr::add(std::move(coeff_terms)), Expr::add(std::move(rest_terms))};
}

} // namespace crn
