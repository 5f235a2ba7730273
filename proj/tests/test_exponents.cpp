#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hahnlab/errors.hpp"
#include "hahnlab/exponent.hpp"
#include "hahnlab/lattice.hpp"

using namespace hahnlab;

namespace {

mpq_class canon_q(const std::string& s) {
  mpq_class q(s);
  q.canonicalize();
  return q;
}

// Independent decimal oracle for pi, correct to the shown digits.
const mpq_class kPiLo = canon_q("31415926535897932/10000000000000000");
const mpq_class kPiHi = canon_q("31415926535897933/10000000000000000");

BasisPtr unit_pi_ctx() {
  return BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::pi()});
}

BasisPtr monster_ctx(int max_r) {
  std::vector<BasisSymbol> syms{BasisSymbol::exact("1", 1), BasisSymbol::pi()};
  for (int j = 2; j <= max_r; ++j) syms.push_back(BasisSymbol::reciprocal_r(3, j));
  return BasisContext::make(syms);
}

mpq_class random_rational(std::mt19937_64& rng) {
  static const int dens[] = {1, 2, 3, 4, 9};
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(0, 4);
  mpq_class q(num(rng), dens[den(rng)]);
  q.canonicalize();
  return q;
}

Exponent random_exponent(const BasisPtr& ctx, std::mt19937_64& rng) {
  Exponent::Coords coords;
  for (int i = 0; i < ctx->size() && i < 3; ++i) {
    mpq_class q = random_rational(rng);
    if (q != 0) coords.emplace_back(i, q);
  }
  return Exponent::make(ctx, std::move(coords));
}

}  // namespace

TEST_CASE("pi enclosure brackets the decimal oracle and tightens") {
  QInterval coarse = BasisContext::machin_pi(0);
  CHECK(coarse.lo < kPiHi);
  CHECK(coarse.hi > kPiLo);
  QInterval fine = BasisContext::machin_pi(6);
  CHECK(fine.lo > kPiLo - mpq_class(1, 1000000000));
  CHECK(fine.lo <= kPiHi);
  CHECK(fine.hi >= kPiLo);
  CHECK(fine.width() < mpq_class(1, 10000000000));
  CHECK(fine.lo >= coarse.lo);
  CHECK(fine.hi <= coarse.hi);
}

TEST_CASE("reciprocal r-family enclosure matches the decimal oracle") {
  // r_2 = 3 + 1 + 1/pi, so 1/r_2 = 0.23157... by direct decimal computation.
  BasisPtr ctx = monster_ctx(3);
  QInterval enc = ctx->enclosure(ctx->index_of("r2"), 4);
  CHECK(enc.lo > canon_q("2315/10000"));
  CHECK(enc.hi < canon_q("2316/10000"));
  // Nested refinement.
  QInterval enc0 = ctx->enclosure(ctx->index_of("r2"), 0);
  CHECK(enc.lo >= enc0.lo);
  CHECK(enc.hi <= enc0.hi);
}

TEST_CASE("basis construction rejects bad symbol lists") {
  CHECK_THROWS_AS(BasisContext::make({BasisSymbol::pi()}), std::invalid_argument);
  CHECK_THROWS_AS(BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::pi(),
                                      BasisSymbol::pi()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::exact("z", -2)}),
                  std::invalid_argument);
}

TEST_CASE("exponent arithmetic and printing") {
  BasisPtr ctx = unit_pi_ctx();
  Exponent a = Exponent::make(ctx, {{1, mpq_class(-1, 9)}, {0, mpq_class(2, 3)}});
  CHECK(a.str() == "(-1/9)*pi + (2/3)");
  CHECK(Exponent::rational(ctx, mpq_class(-1, 9)).str() == "-1/9");
  CHECK(Exponent::zero(ctx).str() == "0");
  Exponent b = Exponent::single(ctx, "pi", mpq_class(1, 9));
  CHECK((a + b).str() == "2/3");
  CHECK((a - a).is_zero());
  CHECK((-a).coord(0) == mpq_class(-2, 3));
  CHECK(a.scaled(3).coord(1) == mpq_class(-1, 3));
  CHECK(a.scaled(0).is_zero());
  // Oracle: (-1/3) + (-1/9) = -4/9.
  Exponent s = Exponent::rational(ctx, mpq_class(-1, 3)) + Exponent::rational(ctx, mpq_class(-1, 9));
  CHECK(s.coord(0) == mpq_class(-4, 9));
  // Unreduced caller input is normalized on entry.
  CHECK(Exponent::rational(ctx, mpq_class(2, 4)).str() == "1/2");
  CHECK(Exponent::rational(ctx, mpq_class(2, 4)).identical(Exponent::rational(ctx, mpq_class(1, 2))));
}

TEST_CASE("comparisons decided by the decimal oracle") {
  BasisPtr ctx = unit_pi_ctx();
  auto q = [&](const mpq_class& v) { return Exponent::rational(ctx, v); };
  auto pi_mult = [&](const mpq_class& v) { return Exponent::single(ctx, "pi", v); };
  // pi/9 > 1/3 since pi > 3, so -pi/9 < -1/3.
  CHECK(pi_mult(mpq_class(-1, 9)).cmp(q(mpq_class(-1, 3))) == -1);
  // -pi/3 < -1.
  CHECK(pi_mult(mpq_class(-1, 3)).cmp(q(-1)) == -1);
  // -pi/27 > -1/3.
  CHECK(pi_mult(mpq_class(-1, 27)).cmp(q(mpq_class(-1, 3))) == 1);
  // pi vs the convergent 355/113: decided with the default budget, but not at
  // refinement level zero.
  CHECK(pi_mult(1).cmp(q(mpq_class(355, 113))) == -1);
  CHECK_THROWS_AS(pi_mult(1).cmp(q(mpq_class(355, 113)), 0), RefinementBudgetError);
  // Fast path: uniform coordinate signs need no refinement.
  CHECK(pi_mult(mpq_class(1, 9)).sign() == 1);
  CHECK((pi_mult(mpq_class(-1, 9)) + q(mpq_class(-1, 2))).sign() == -1);
}

TEST_CASE("comparisons across the r-family") {
  BasisPtr ctx = monster_ctx(8);
  auto r = [&](int j, const mpq_class& v) {
    return Exponent::single(ctx, "r" + std::to_string(j), v);
  };
  // 1/r_2 = 0.2315... < 1/3, and the family decreases with the index.
  CHECK(r(2, 1).cmp(Exponent::rational(ctx, mpq_class(1, 3))) == -1);
  for (int j = 2; j < 8; ++j) CHECK(r(j + 1, 1).cmp(r(j, 1)) == -1);
  // 1/r_5 < 1/7 < 1/r_6 is false; oracle: r_5 = 7 + 1/pi so 1/r_5 < 1/7.
  CHECK(r(5, 1).cmp(Exponent::rational(ctx, mpq_class(1, 7))) == -1);
  CHECK(r(5, 1).cmp(Exponent::rational(ctx, mpq_class(1, 8))) == 1);
}

TEST_CASE("order laws hold on random exponents") {
  BasisPtr ctx = unit_pi_ctx();
  std::mt19937_64 rng(20260823);
  int trichotomy_zero = 0;
  for (int it = 0; it < 1000; ++it) {
    Exponent a = random_exponent(ctx, rng);
    Exponent b = random_exponent(ctx, rng);
    Exponent c = random_exponent(ctx, rng);
    int ab = a.cmp(b);
    // Antisymmetry and agreement with structural equality.
    CHECK(b.cmp(a) == -ab);
    CHECK((ab == 0) == a.identical(b));
    if (ab == 0) ++trichotomy_zero;
    // Translation invariance.
    CHECK((a + c).cmp(b + c) == ab);
    // Transitivity on the sorted triple.
    if (ab <= 0 && b.cmp(c) <= 0) CHECK(a.cmp(c) <= 0);
    // Scaling by a negative rational flips the order.
    CHECK(a.scaled(-2).cmp(b.scaled(-2)) == -ab);
  }
  // Random pairs almost never coincide; make sure the equality branch was
  // exercised at least via a - a below.
  CHECK(trichotomy_zero < 100);
  Exponent d = random_exponent(ctx, rng);
  CHECK(d.cmp(d) == 0);
}

TEST_CASE("lattice membership on pinned examples") {
  BasisPtr ctx = monster_ctx(3);
  auto q = [&](const mpq_class& v) { return Exponent::rational(ctx, v); };
  auto pi_mult = [&](const mpq_class& v) { return Exponent::single(ctx, "pi", v); };
  ValueLattice l(ctx, {q(mpq_class(1, 3)), pi_mult(1)});
  CHECK(l.contains(q(mpq_class(2, 3))));
  CHECK(l.contains(pi_mult(-1) + q(mpq_class(1, 3))));
  CHECK(!l.contains(q(mpq_class(1, 2))));
  CHECK(!l.contains(pi_mult(mpq_class(1, 3))));
  CHECK(l.contains(Exponent::zero(ctx)));

  // Mixed-generator lattice: pi/3, 1/3, 3*(1/r_2).
  ValueLattice g1(ctx, {pi_mult(mpq_class(1, 3)), q(mpq_class(1, 3)),
                        Exponent::single(ctx, "r2", 3)});
  CHECK(g1.contains(pi_mult(mpq_class(-1, 3)) + q(mpq_class(-1, 3))));
  CHECK(g1.contains(Exponent::single(ctx, "r2", 6) + pi_mult(1)));
  CHECK(!g1.contains(pi_mult(mpq_class(1, 9))));
  CHECK(!g1.contains(Exponent::single(ctx, "r2", 1)));
}

TEST_CASE("lattice membership agrees with brute-force search") {
  BasisPtr ctx = unit_pi_ctx();
  std::mt19937_64 rng(914);
  for (int it = 0; it < 300; ++it) {
    std::vector<Exponent> gens;
    std::uniform_int_distribution<int> ngen(1, 3);
    int n = ngen(rng);
    for (int i = 0; i < n; ++i) gens.push_back(random_exponent(ctx, rng));
    ValueLattice l(ctx, gens);
    // A known member: small integer combination.
    std::uniform_int_distribution<int> coeff(-5, 5);
    Exponent member = Exponent::zero(ctx);
    std::vector<int> used;
    for (const auto& g : gens) {
      int c = coeff(rng);
      used.push_back(c);
      member = member + g.scaled(c);
    }
    CHECK(l.contains(member));
    // A random probe: compare against exhaustive small-coefficient search.
    Exponent probe = random_exponent(ctx, rng);
    bool brute = false;
    std::vector<int> cs(gens.size(), -5);
    while (!brute) {
      Exponent acc = Exponent::zero(ctx);
      for (size_t i = 0; i < gens.size(); ++i) acc = acc + gens[i].scaled(cs[i]);
      if (acc.identical(probe)) brute = true;
      size_t k = 0;
      while (k < cs.size() && cs[k] == 5) cs[k++] = -5;
      if (k == cs.size()) break;
      ++cs[k];
    }
    if (brute) CHECK(l.contains(probe));
    if (!l.contains(probe)) CHECK(!brute);
  }
}

TEST_CASE("lattice index over sublattices") {
  BasisPtr ctx = unit_pi_ctx();
  auto level = [&](int l) {
    mpq_class step(1, 1);
    for (int i = 0; i < l; ++i) step /= 3;
    return ValueLattice(ctx, {Exponent::rational(ctx, step),
                              Exponent::single(ctx, "pi", step)});
  };
  // Index of (1/3^{l+1})(Z + pi Z) over (1/3^l)(Z + pi Z) is 9: the
  // coefficient matrix is diag(3, 3) and its Smith product is 9.
  for (int l = 0; l <= 4; ++l) {
    auto idx = level(l + 1).index_over(level(l));
    REQUIRE(idx.has_value());
    CHECK(*idx == 9);
  }
  // Brute-force oracle: [ (1/3)Z : Z ] counts cosets 0, 1/3, 2/3.
  ValueLattice thirds(ctx, {Exponent::rational(ctx, mpq_class(1, 3))});
  ValueLattice ints(ctx, {Exponent::rational(ctx, 1)});
  auto idx = thirds.index_over(ints);
  REQUIRE(idx.has_value());
  CHECK(*idx == 3);
  // Rank drop means infinite index.
  ValueLattice plane(ctx, {Exponent::rational(ctx, 1), Exponent::single(ctx, "pi", 1)});
  CHECK(!plane.index_over(ints).has_value());
  // Not a sublattice at all.
  CHECK_THROWS_AS(ints.index_over(thirds), std::invalid_argument);
  // Redundant generators do not disturb the index.
  ValueLattice redundant(ctx, {Exponent::rational(ctx, mpq_class(1, 3)),
                               Exponent::rational(ctx, mpq_class(2, 3)),
                               Exponent::single(ctx, "pi", mpq_class(1, 3))});
  auto idx2 = redundant.index_over(level(0));
  REQUIRE(idx2.has_value());
  CHECK(*idx2 == 9);
}

TEST_CASE("context mismatch is rejected") {
  BasisPtr a = unit_pi_ctx();
  BasisPtr b = unit_pi_ctx();  // structurally equal, different identity
  CHECK_THROWS_AS(Exponent::rational(a, 1) + Exponent::rational(b, 1), ContextMismatchError);
  ValueLattice l(a, {Exponent::rational(a, 1)});
  CHECK_THROWS_AS(l.contains(Exponent::rational(b, 1)), ContextMismatchError);
}
