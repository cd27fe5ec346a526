#include "crn/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace crn {

namespace {

enum class Tok : std::uint8_t {
  Ident, Number, Colon, Semi, Plus, Minus, Star, Slash, Caret,
  LParen, RParen, Arrow, RevArrow, Equals, Newline, End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;
  std::vector<ParseDiagnostic>* diags;

  explicit Lexer(const std::string& s, std::vector<ParseDiagnostic>* d) : src(s), diags(d) {}

  SourceSpan here(std::size_t len = 1) const { return SourceSpan{line, col, pos, pos + len}; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos < src.size(); ++i) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      if (c == '\r') {
        advance();
        continue;
      }
      if (c == '\n') {
        out.push_back({Tok::Newline, "\n", here()});
        advance();
        continue;
      }
      if (std::isspace((unsigned char)c)) {
        advance();
        continue;
      }
      SourceSpan sp = here();
      if (std::isalpha((unsigned char)c) || c == '_') {
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum((unsigned char)src[pos]) || src[pos] == '_'))
          advance();
        sp.byte_end = pos;
        out.push_back({Tok::Ident, src.substr(start, pos - start), sp});
        continue;
      }
      if (std::isdigit((unsigned char)c)) {
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit((unsigned char)src[pos])) advance();
        if (pos < src.size() && src[pos] == '.') {
          advance();
          while (pos < src.size() && std::isdigit((unsigned char)src[pos])) advance();
        }
        sp.byte_end = pos;
        out.push_back({Tok::Number, src.substr(start, pos - start), sp});
        continue;
      }
      switch (c) {
        case ':': out.push_back({Tok::Colon, ":", sp}); advance(); continue;
        case ';': out.push_back({Tok::Semi, ";", sp}); advance(); continue;
        case '+': out.push_back({Tok::Plus, "+", sp}); advance(); continue;
        case '*': out.push_back({Tok::Star, "*", sp}); advance(); continue;
        case '/': out.push_back({Tok::Slash, "/", sp}); advance(); continue;
        case '^': out.push_back({Tok::Caret, "^", sp}); advance(); continue;
        case '(': out.push_back({Tok::LParen, "(", sp}); advance(); continue;
        case ')': out.push_back({Tok::RParen, ")", sp}); advance(); continue;
        case '=': out.push_back({Tok::Equals, "=", sp}); advance(); continue;
        case '-': {
          if (pos + 1 < src.size() && src[pos + 1] == '>') {
            sp.byte_end = pos + 2;
            out.push_back({Tok::Arrow, "->", sp});
            advance(2);
          } else {
            out.push_back({Tok::Minus, "-", sp});
            advance();
          }
          continue;
        }
        case '<': {
          if (pos + 2 < src.size() && src[pos + 1] == '-' && src[pos + 2] == '>') {
            sp.byte_end = pos + 3;
            out.push_back({Tok::RevArrow, "<->", sp});
            advance(3);
          } else {
            diags->push_back({ParseDiagnostic::Severity::Error, "stray '<'", sp});
            advance();
          }
          continue;
        }
        default:
          diags->push_back({ParseDiagnostic::Severity::Error,
                            std::string("unexpected character '") + c + "'", sp});
          advance();
          continue;
      }
    }
    out.push_back({Tok::End, "", here(0)});
    return out;
  }
};

Rat parse_number(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rat(BigInt(text));
  std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
  BigInt den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  BigInt num = BigInt(ip.empty() ? "0" : ip) * den + BigInt(fp.empty() ? "0" : fp);
  return Rat(num, den);
}

std::string lower(const std::string& s) {
  std::string r = s;
  std::transform(r.begin(), r.end(), r.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return r;
}

bool looks_like_concentration(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// raw complex: list of (signed coefficient, species name, span)
struct RawTerm {
  long long coef;
  std::string name;
  SourceSpan span;
};
struct RawComplex {
  std::vector<RawTerm> terms;  // empty = zero complex
  SourceSpan span;
};

struct RawReaction {
  std::string label;
  SourceSpan label_span;
  RawComplex source, product;
  bool reversible = false;
  std::vector<Token> rate_fwd, rate_rev;
};

struct RawDirective {
  enum class Kind { Translate, Free } kind;
  std::string label;  // translate target
  SourceSpan span;
  RawComplex shift;                 // translate
  std::vector<std::pair<std::string, SourceSpan>> names;  // free
};

struct LineParser {
  const std::vector<Token>& toks;
  std::size_t i = 0;
  std::vector<ParseDiagnostic>& diags;

  const Token& peek() const { return toks[i]; }
  const Token& get() { return toks[i + 1 < toks.size() ? i++ : i]; }
  bool at(Tok k) const { return toks[i].kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++i;
      return true;
    }
    return false;
  }
  void error(const std::string& msg, const SourceSpan& sp) {
    diags.push_back({ParseDiagnostic::Severity::Error, msg, sp});
  }
  void sync_line() {
    while (!at(Tok::Newline) && !at(Tok::End)) ++i;
    accept(Tok::Newline);
  }

  std::optional<RawComplex> parse_complex(bool allow_signed) {
    RawComplex out;
    out.span = peek().span;
    // zero complex
    if (at(Tok::Number) && peek().text == "0") {
      get();
      return out;
    }
    long long sign = 1;
    if (allow_signed && accept(Tok::Minus)) sign = -1;
    while (true) {
      long long coef = 1;
      if (at(Tok::Number)) {
        const std::string& t = get().text;
        if (t.find('.') != std::string::npos) {
          error("complex coefficients must be integers", toks[i - 1].span);
          return std::nullopt;
        }
        coef = std::stoll(t);
      }
      if (!at(Tok::Ident)) {
        error("expected species name in complex", peek().span);
        return std::nullopt;
      }
      Token name = get();
      out.terms.push_back({sign * coef, name.text, name.span});
      if (accept(Tok::Plus)) {
        sign = 1;
        continue;
      }
      if (allow_signed && at(Tok::Minus)) {
        get();
        sign = -1;
        continue;
      }
      break;
    }
    return out;
  }

  std::vector<Token> capture_expr_tokens() {
    std::vector<Token> out;
    int depth = 0;
    while (!at(Tok::Newline) && !at(Tok::End)) {
      if (at(Tok::Semi) && depth == 0) break;
      if (at(Tok::LParen)) ++depth;
      if (at(Tok::RParen)) --depth;
      out.push_back(get());
    }
    return out;
  }
};

// Pratt-style expression parser over captured tokens.
struct ExprParser {
  const std::vector<Token>& toks;
  std::size_t i = 0;
  Model& model;
  std::vector<ParseDiagnostic>& diags;
  bool failed = false;

  const Token& peek() const {
    static Token end{Tok::End, "", {}};
    return i < toks.size() ? toks[i] : end;
  }
  bool at(Tok k) const { return peek().kind == k; }
  Token get() {
    Token t = peek();
    if (i < toks.size()) ++i;
    return t;
  }
  void error(const std::string& msg, const SourceSpan& sp) {
    if (!failed) diags.push_back({ParseDiagnostic::Severity::Error, msg, sp});
    failed = true;
  }

  SymId resolve(const Token& t) {
    auto& tab = *model.net.symbols;
    std::string low = lower(t.text);
    SymId existing = tab.lookup(low);
    if (existing != kNoSym && tab.kind(existing) == SymKind::Concentration) return existing;
    if (looks_like_concentration(low)) {
      // concentration-shaped identifier must match a species
      error("rate expression references unknown species '" + t.text + "'", t.span);
      return tab.intern(low, SymKind::Parameter);
    }
    static const char* named_constants[] = {"alpha", "beta", "kbar", "ktilde"};
    for (auto* nc : named_constants)
      if (t.text == nc) return tab.intern(t.text, SymKind::NamedConstant);
    return tab.intern(t.text, SymKind::Parameter);
  }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    if (!at(Tok::End) && i < toks.size() && !failed)
      error("unexpected token '" + peek().text + "' in expression", peek().span);
    return failed ? nullptr : e;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    while (!failed && (at(Tok::Plus) || at(Tok::Minus))) {
      bool minus = get().kind == Tok::Minus;
      ExprPtr rhs = parse_term();
      if (failed) return lhs;
      lhs = minus ? Expr::sub(lhs, rhs) : Expr::add({lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (!failed && (at(Tok::Star) || at(Tok::Slash))) {
      bool div = get().kind == Tok::Slash;
      ExprPtr rhs = parse_unary();
      if (failed) return lhs;
      lhs = div ? Expr::div(lhs, rhs) : Expr::mul({lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (accept_minus()) {
      ExprPtr e = parse_unary();
      return failed ? e : Expr::neg(e);
    }
    return parse_power();
  }

  bool accept_minus() {
    if (at(Tok::Minus)) {
      get();
      return true;
    }
    return false;
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (!failed && at(Tok::Caret)) {
      get();
      bool neg = accept_minus();
      ExprPtr e = parse_power();  // right associative
      if (failed) return base;
      if (neg) e = Expr::neg(e);
      return Expr::pow(base, e);
    }
    return base;
  }

  ExprPtr parse_atom() {
    if (at(Tok::Number)) return Expr::num(parse_number(get().text));
    if (at(Tok::Ident)) {
      Token t = get();
      return Expr::symbol(resolve(t));
    }
    if (at(Tok::LParen)) {
      get();
      ExprPtr e = parse_sum();
      if (!accept(Tok::RParen)) error("expected ')'", peek().span);
      return e;
    }
    error("expected number, identifier or '(' in expression", peek().span);
    return Expr::num(0);
  }

  bool accept(Tok k) {
    if (at(k)) {
      get();
      return true;
    }
    return false;
  }
};

int register_species(Model& m, const std::string& name, const SourceSpan& sp,
                     std::vector<ParseDiagnostic>& diags) {
  int idx = m.net.species_index(name);
  if (idx >= 0) return idx;
  std::string conc = lower(name);
  auto& tab = *m.net.symbols;
  SymId existing = tab.lookup(conc);
  if (existing != kNoSym && tab.kind(existing) != SymKind::Concentration) {
    diags.push_back({ParseDiagnostic::Severity::Error,
                     "species '" + name + "' collides with symbol '" + conc + "'", sp});
  }
  for (auto& sp2 : m.net.species) {
    if (lower(sp2.name) == conc) {
      diags.push_back({ParseDiagnostic::Severity::Error,
                       "species '" + name + "' duplicates '" + sp2.name +
                           "' after case folding",
                       sp});
      return m.net.species_index(sp2.name);
    }
  }
  SymId sym = tab.intern(conc, SymKind::Concentration);
  tab.set_kind(sym, SymKind::Concentration);
  m.net.species.push_back({name, sym});
  return (int)m.net.species.size() - 1;
}

std::optional<CoefVec> resolve_complex(Model& m, const RawComplex& raw, bool allow_negative,
                                       std::vector<ParseDiagnostic>& diags) {
  CoefVec v(m.net.species.size(), 0);
  for (auto& t : raw.terms) {
    int idx = m.net.species_index(t.name);
    if (idx < 0) {
      diags.push_back({ParseDiagnostic::Severity::Error,
                       "unknown species '" + t.name + "'", t.span});
      return std::nullopt;
    }
    v[idx] += t.coef;
  }
  if (!allow_negative)
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] < 0) {
        diags.push_back({ParseDiagnostic::Severity::Error,
                         "negative coefficient in complex", raw.span});
        return std::nullopt;
      }
  return v;
}

} // namespace

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::ostringstream os;
  os << (d.severity == ParseDiagnostic::Severity::Error ? "error" : "warning") << " at "
     << d.span.line << ":" << d.span.col << ": " << d.message;
  return os.str();
}

ParseResult parse_network(const std::string& text) {
  ParseResult result;
  auto& diags = result.diagnostics;
  Lexer lex(text, &diags);
  std::vector<Token> toks = lex.run();

  Model model;
  model.net.symbols = std::make_shared<SymbolTable>();

  std::vector<RawReaction> raw_reactions;
  std::vector<RawDirective> raw_directives;

  LineParser lp{toks, 0, diags};
  while (!lp.at(Tok::End)) {
    if (lp.accept(Tok::Newline)) continue;
    if (lp.at(Tok::Ident) && lp.peek().text == "species") {
      lp.get();
      bool any = false;
      while (lp.at(Tok::Ident)) {
        Token t = lp.get();
        register_species(model, t.text, t.span, diags);
        any = true;
      }
      if (!any) lp.error("species header lists no names", lp.peek().span);
      if (!lp.at(Tok::Newline) && !lp.at(Tok::End))
        lp.error("unexpected token after species header", lp.peek().span);
      lp.sync_line();
      continue;
    }
    if (lp.at(Tok::Ident) && lp.peek().text == "translate") {
      RawDirective d;
      d.kind = RawDirective::Kind::Translate;
      d.span = lp.peek().span;
      lp.get();
      if (!lp.at(Tok::Ident)) {
        lp.error("expected reaction label after 'translate'", lp.peek().span);
        lp.sync_line();
        continue;
      }
      d.label = lp.get().text;
      if (!(lp.at(Tok::Ident) && lp.peek().text == "by")) {
        lp.error("expected 'by' in translate directive", lp.peek().span);
        lp.sync_line();
        continue;
      }
      lp.get();
      auto shift = lp.parse_complex(/*allow_signed=*/true);
      if (!shift) {
        lp.sync_line();
        continue;
      }
      d.shift = *shift;
      raw_directives.push_back(std::move(d));
      lp.sync_line();
      continue;
    }
    if (lp.at(Tok::Ident) && lp.peek().text == "free") {
      RawDirective d;
      d.kind = RawDirective::Kind::Free;
      d.span = lp.peek().span;
      lp.get();
      while (lp.at(Tok::Ident)) {
        Token t = lp.get();
        d.names.push_back({t.text, t.span});
      }
      if (d.names.empty()) lp.error("free directive lists no species", d.span);
      raw_directives.push_back(std::move(d));
      lp.sync_line();
      continue;
    }
    if (lp.at(Tok::Ident)) {
      // reaction line: LABEL ':' complex (->|<->) complex ';' expr (';' expr)?
      RawReaction rr;
      Token lab = lp.get();
      rr.label = lab.text;
      rr.label_span = lab.span;
      if (!lp.accept(Tok::Colon)) {
        lp.error("expected ':' after reaction label '" + rr.label + "'", lp.peek().span);
        lp.sync_line();
        continue;
      }
      auto src = lp.parse_complex(false);
      if (!src) {
        lp.sync_line();
        continue;
      }
      rr.source = *src;
      bool rev = false;
      if (lp.at(Tok::Arrow)) {
        lp.get();
      } else if (lp.at(Tok::RevArrow)) {
        lp.get();
        rev = true;
      } else {
        lp.error("expected '->' or '<->'", lp.peek().span);
        lp.sync_line();
        continue;
      }
      rr.reversible = rev;
      auto prd = lp.parse_complex(false);
      if (!prd) {
        lp.sync_line();
        continue;
      }
      rr.product = *prd;
      if (!lp.accept(Tok::Semi)) {
        lp.error("expected ';' before rate expression", lp.peek().span);
        lp.sync_line();
        continue;
      }
      rr.rate_fwd = lp.capture_expr_tokens();
      if (rr.rate_fwd.empty())
        lp.error("missing rate expression for reaction " + rr.label, lp.peek().span);
      if (rev) {
        if (lp.accept(Tok::Semi)) {
          rr.rate_rev = lp.capture_expr_tokens();
        }
        if (rr.rate_rev.empty())
          lp.error("reversible reaction " + rr.label + " needs a second rate expression",
                   lp.peek().span);
      } else if (lp.at(Tok::Semi)) {
        lp.error("unexpected second rate expression", lp.peek().span);
      }
      // register species mentioned in the complexes, in order of appearance
      for (auto* cx : {&rr.source, &rr.product})
        for (auto& t : cx->terms) register_species(model, t.name, t.span, diags);
      raw_reactions.push_back(std::move(rr));
      lp.sync_line();
      continue;
    }
    lp.error("expected reaction line or directive", lp.peek().span);
    lp.sync_line();
  }

  // second pass: resolve complexes and rate expressions with the full species list
  std::set<std::string> labels;
  for (auto& rr : raw_reactions) {
    auto add_reaction = [&](const std::string& label, const RawComplex& s, const RawComplex& p,
                            const std::vector<Token>& rate) {
      auto sv = resolve_complex(model, s, false, diags);
      auto pv = resolve_complex(model, p, false, diags);
      if (!sv || !pv) return;
      if (*sv == *pv) {
        diags.push_back({ParseDiagnostic::Severity::Error,
                         "self-loop complex in reaction " + label, rr.label_span});
        return;
      }
      if (!labels.insert(label).second) {
        diags.push_back({ParseDiagnostic::Severity::Error,
                         "duplicate reaction label " + label, rr.label_span});
        return;
      }
      Reaction r;
      r.label = label;
      r.source = model.net.add_complex(*sv);
      r.product = model.net.add_complex(*pv);
      model.net.reactions.push_back(r);
      ExprParser ep{rate, 0, model, diags};
      ExprPtr e = ep.parse();
      if (!e) e = Expr::num(0);
      RateLaw rl;
      rl.expr = e;
      model.kin.rates.push_back(rl);
    };
    if (rr.reversible) {
      add_reaction(rr.label + "f", rr.source, rr.product, rr.rate_fwd);
      if (!rr.rate_rev.empty()) add_reaction(rr.label + "r", rr.product, rr.source, rr.rate_rev);
    } else {
      add_reaction(rr.label, rr.source, rr.product, rr.rate_fwd);
    }
  }

  // classify now that everything is resolved
  for (std::size_t i = 0; i < model.net.reactions.size(); ++i) {
    model.kin.rates[i].tag = classify_rate(model.kin.rates[i].expr,
                                           model.net.complexes[model.net.reactions[i].source],
                                           model.net);
  }

  for (auto& d : raw_directives) {
    if (d.kind == RawDirective::Kind::Translate) {
      int rid = -1;
      for (std::size_t i = 0; i < model.net.reactions.size(); ++i)
        if (model.net.reactions[i].label == d.label) rid = (int)i;
      if (rid < 0) {
        diags.push_back({ParseDiagnostic::Severity::Error,
                         "translate directive names unknown reaction '" + d.label + "'", d.span});
        continue;
      }
      auto shift = resolve_complex(model, d.shift, /*allow_negative=*/true, diags);
      if (!shift) continue;
      model.translate_shifts[rid] = *shift;
    } else {
      for (auto& [name, sp] : d.names) {
        int idx = model.net.species_index(name);
        if (idx < 0) {
          // accept the concentration spelling too
          for (std::size_t i = 0; i < model.net.species.size(); ++i)
            if (lower(model.net.species[i].name) == lower(name)) idx = (int)i;
        }
        if (idx < 0) {
          diags.push_back({ParseDiagnostic::Severity::Error,
                           "free directive names unknown species '" + name + "'", sp});
          continue;
        }
        if (std::find(model.free_species.begin(), model.free_species.end(), idx) ==
            model.free_species.end())
          model.free_species.push_back(idx);
      }
    }
  }

  if (model.net.reactions.empty()) {
    diags.push_back(
        {ParseDiagnostic::Severity::Error, "no reactions in input", SourceSpan{1, 1, 0, 0}});
  }

  if (result.has_errors()) return result;

  // pad complexes created before later species registrations
  for (auto& c : model.net.complexes) c.coeffs.resize(model.net.species.size(), 0);
  try {
    model.net.validate();
  } catch (const StructuralError& e) {
    diags.push_back({ParseDiagnostic::Severity::Error, e.what(), SourceSpan{1, 1, 0, 0}});
    return result;
  }
  result.model = std::move(model);
  return result;
}

std::string render_network(const Model& model) {
  std::ostringstream os;
  const Network& net = model.net;
  os << "species";
  for (auto& s : net.species) os << " " << s.name;
  os << "\n";
  for (std::size_t i = 0; i < net.reactions.size(); ++i) {
    const auto& r = net.reactions[i];
    os << r.label << ": " << complex_to_string(net, net.complexes[r.source].coeffs) << " -> "
       << complex_to_string(net, net.complexes[r.product].coeffs) << " ; "
       << to_string(model.kin.rates[i].expr, *net.symbols) << "\n";
  }
  for (auto& [rid, shift] : model.translate_shifts) {
    bool nonzero = false;
    for (auto v : shift) nonzero |= v != 0;
    if (!nonzero) continue;
    os << "translate " << net.reactions[rid].label << " by " << complex_to_string(net, shift)
       << "\n";
  }
  if (!model.free_species.empty()) {
    os << "free";
    for (int idx : model.free_species) os << " " << net.species[idx].name;
    os << "\n";
  }
  return os.str();
}

ExprParseResult parse_expression(const std::string& text, Model& model) {
  ExprParseResult out;
  Lexer lex(text, &out.diagnostics);
  std::vector<Token> toks = lex.run();
  if (!toks.empty() && toks.back().kind == Tok::End) toks.pop_back();
  while (!toks.empty() && toks.back().kind == Tok::Newline) toks.pop_back();
  ExprParser ep{toks, 0, model, out.diagnostics};
  out.expr = ep.parse();
  return out;
}

ParamFileResult parse_param_file(const std::string& text, Model& model) {
  ParamFileResult out;
  ParamFile pf;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = std::all_of(line.begin(), line.end(),
                             [](unsigned char c) { return std::isspace(c); });
    if (blank) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      out.diagnostics.push_back({ParseDiagnostic::Severity::Error,
                                 "expected 'name = expression'",
                                 SourceSpan{lineno, 1, 0, 0}});
      continue;
    }
    std::string name = line.substr(0, eq);
    name.erase(std::remove_if(name.begin(), name.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               name.end());
    auto er = parse_expression(line.substr(eq + 1), model);
    for (auto& d : er.diagnostics) {
      ParseDiagnostic fixed = d;
      fixed.span.line = lineno;
      out.diagnostics.push_back(fixed);
    }
    if (er.expr) pf.entries.push_back({name, er.expr});
  }
  for (auto& d : out.diagnostics)
    if (d.severity == ParseDiagnostic::Severity::Error) return out;
  out.file = std::move(pf);
  return out;
}

} // namespace crn
