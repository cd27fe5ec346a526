#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crn/matrix.hpp"
#include "crn/polynomial.hpp"
#include "crn/ratfunc.hpp"
#include "crn/symtab.hpp"

#include <random>

using namespace crn;

namespace {

RatMat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo = -3,
                     int hi = 3) {
  std::uniform_int_distribution<int> d(lo, hi);
  RatMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = d(rng);
  return m;
}

} // namespace

TEST_CASE("rational basics") {
  CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
  CHECK(is_integer(rat(4, 2)));
  CHECK(!is_integer(rat(1, 3)));
}

TEST_CASE("polynomial arithmetic and exact division") {
  SymbolTable tab;
  SymId x = tab.intern("x", SymKind::Parameter);
  SymId y = tab.intern("y", SymKind::Parameter);
  Poly px = Poly::var(x), py = Poly::var(y);
  Poly p = (px + py) * (px - py);
  Poly expect = px * px - py * py;
  CHECK(p.equal(expect));

  auto q = (px * px - py * py).divide_exact(px + py);
  REQUIRE(q.has_value());
  CHECK(q->equal(px - py));
  CHECK(!(px * px + py).divide_exact(px + py).has_value());

  Poly c = p.coeff_of(x, 2);
  CHECK(c.equal(Poly(Rat(1))));
  CHECK(p.coeff_of(x, 0).equal(-(py * py)));
  CHECK(p.degree_in(x) == 2);
}

TEST_CASE("polynomial content removal keeps leading sign positive") {
  SymbolTable tab;
  SymId x = tab.intern("x", SymKind::Parameter);
  Poly p = Poly::var(x, 2).scaled(Rat(-4)) + Poly::var(x, 3).scaled(Rat(-6));
  p.remove_content();
  Poly expect = Poly::var(x) * Poly(Rat(3)) + Poly(Rat(2));
  CHECK(p.equal(expect));
}

TEST_CASE("rational function normalization and equality") {
  SymbolTable tab;
  SymId a = tab.intern("a", SymKind::Parameter);
  SymId b = tab.intern("b", SymKind::Parameter);
  Poly pa = Poly::var(a), pb = Poly::var(b);
  RatFunc f(pa * pa - pb * pb, pa + pb);  // collapses to a - b
  CHECK(f.is_polynomial());
  CHECK(f.num().equal(pa - pb));

  RatFunc g(pa, pb);
  RatFunc h = g + RatFunc(pb, pa);  // (a^2 + b^2) / (a b)
  CHECK(h.equal(RatFunc(pa * pa + pb * pb, pa * pb)));
  CHECK(h.pow(2).equal(h * h));
  CHECK((g / g).equal(RatFunc(Poly(Rat(1)))));
}

TEST_CASE("poly substitution by rational function") {
  SymbolTable tab;
  SymId s = tab.intern("s", SymKind::Parameter);
  SymId u = tab.intern("u", SymKind::Parameter);
  SymId v = tab.intern("v", SymKind::Parameter);
  // p = s^2 + u, substitute s -> u/v: (u^2 + u v^2) / v^2
  Poly p = Poly::var(s, 2) + Poly::var(u);
  RatFunc r = poly_substitute(p, s, RatFunc(Poly::var(u), Poly::var(v)));
  RatFunc expect(Poly::var(u, 2) + Poly::var(u) * Poly::var(v, 2), Poly::var(v, 2));
  CHECK(r.equal(expect));
}

TEST_CASE("rref, rank, nullspace, inverse") {
  RatMat m(3, 4);
  // rows: [1 2 0 1; 0 1 1 0; 1 3 1 1] -> rank 2
  long long rows[3][4] = {{1, 2, 0, 1}, {0, 1, 1, 0}, {1, 3, 1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) m.at(i, j) = rows[i][j];
  CHECK(m.rank() == 2);
  CHECK(rank_bareiss(m) == 2);
  RatMat ns = m.nullspace();
  CHECK(ns.cols() == 2);
  CHECK((m * ns).is_zero());

  RatMat id = RatMat::identity(3);
  auto inv = id.inverse();
  REQUIRE(inv.has_value());
  CHECK(*inv == id);
  RatMat sq(2, 2);
  sq.at(0, 0) = 1;
  sq.at(0, 1) = 2;
  sq.at(1, 0) = 3;
  sq.at(1, 1) = 4;
  auto sinv = sq.inverse();
  REQUIRE(sinv.has_value());
  CHECK((sq * *sinv) == RatMat::identity(2));
}

TEST_CASE("zero matrix has rank 0") {
  RatMat z(4, 6);
  CHECK(z.rank() == 0);
  CHECK(rank_bareiss(z) == 0);
  RatMat h = z.generalized_inverse();
  CHECK(h.rows() == 6);
  CHECK(h.cols() == 4);
}

TEST_CASE("rank agrees with the independent Bareiss oracle on random matrices") {
  std::mt19937_64 rng(0xC0FFEE);
  for (int it = 0; it < 300; ++it) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    RatMat m = random_matrix(rng, r, c);
    CHECK(m.rank() == rank_bareiss(m));
  }
}

TEST_CASE("generalized inverse: M H M = M and M B = 0 on 500 random matrices") {
  std::mt19937_64 rng(0x5EED);
  for (int it = 0; it < 500; ++it) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 7;
    RatMat m = random_matrix(rng, r, c);
    RatMat h = m.generalized_inverse();
    CHECK(((m * h * m) - m).is_zero());
    RatMat b = m.nullspace();
    CHECK((m * b).is_zero());
    CHECK(b.cols() == c - m.rank());
    if (b.cols() > 0) CHECK(b.rank() == b.cols());
  }
}

TEST_CASE("invertible matrix: generalized inverse is the inverse") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 50;) {
    RatMat m = random_matrix(rng, 3, 3);
    if (m.rank() != 3) continue;
    ++it;
    RatMat h = m.generalized_inverse();
    CHECK((m * h) == RatMat::identity(3));
  }
}
