#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hahnlab/errors.hpp"
#include "hahnlab/extensions.hpp"

using namespace hahnlab;

namespace {

struct Env {
  BasisPtr basis;
  FieldPtr field;
  SeriesCtxPtr ctx;

  Env() {
    basis = BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::pi()});
    field = FieldSpec::make(3, 2);
    ctx = SeriesContext::make(basis, field);
  }

  Exponent q(long num, long den = 1) const {
    mpq_class v(num, den);
    v.canonicalize();
    return Exponent::rational(basis, v);
  }
  Exponent pi_q(long num, long den = 1) const {
    mpq_class v(num, den);
    v.canonicalize();
    return Exponent::single(basis, "pi", v);
  }
  FFElem c(long v) const { return FFElem::from_int(field, v); }
  HahnSeries mono(long coef, Exponent e) const { return HahnSeries::monomial(ctx, c(coef), e); }
  HahnSeries umono(Exponent e) const { return HahnSeries::monomial(ctx, FFElem::u(field), e); }

  // The additive tower a_1, a_2, ... with AS(a_1) = t^-1, AS(a_{l+1}) = -a_l.
  std::vector<ASElement> tower(int count) const {
    std::vector<ASElement> out;
    out.push_back(as_solve(mono(1, q(-1)), "a1"));
    for (int l = 1; l < count; ++l)
      out.push_back(as_solve(-out.back().solution, "a" + std::to_string(l + 1)));
    return out;
  }

  HahnSeries random_finite(std::mt19937_64& rng, int max_terms = 4) const {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<long> coef(1, 8);
    static const int dens[] = {1, 3, 9};
    std::vector<std::pair<mpq_class, long>> raw;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
      mpq_class e(num(rng), dens[pick(rng)]);
      e.canonicalize();
      raw.emplace_back(e, coef(rng));
    }
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Term> terms;
    for (auto& [e, cf] : raw) {
      if (!terms.empty() && terms.back().exp.coord(0) == e) continue;
      terms.push_back(Term{q(e.get_num().get_si(), e.get_den().get_si()),
                           FFElem::from_index(field, cf)});
    }
    return HahnSeries::from_terms(ctx, terms);
  }
};

bool exps_equal(const std::vector<Exponent>& a, const std::vector<Exponent>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].identical(b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("iterated-root solutions of x^p - x = c") {
  Env env;
  ASElement a1 = as_solve(env.mono(1, env.q(-1)), "a1");
  auto terms = a1.solution.first_terms(4);
  REQUIRE(terms.size() == 4);
  mpq_class e(-1, 3);
  for (auto& t : terms) {
    CHECK(t.exp.identical(Exponent::rational(env.basis, e)));
    CHECK(t.coef.str() == "1");
    e /= 3;
  }
  for (long den : {2L, 100L}) CHECK(as_element_check(a1, env.q(-1, den)));
  CHECK(as_element_check(a1, env.q(-2)));

  // The second tower level collects iterated roots of the first with
  // multiplicities k-1 mod 3 at exponent -1/3^k.
  ASElement a2 = as_solve(-a1.solution, "a2");
  auto t2 = a2.solution.first_terms(3);
  REQUIRE(t2.size() == 3);
  CHECK(t2[0].exp.identical(env.q(-1, 9)));
  CHECK(t2[0].coef.str() == "2");
  CHECK(t2[1].exp.identical(env.q(-1, 27)));
  CHECK(t2[1].coef.str() == "1");
  CHECK(t2[2].exp.identical(env.q(-1, 243)));
  CHECK(t2[2].coef.str() == "2");
  CHECK(as_element_check(a2, env.q(-1, 100)));

  ASElement alpha = as_solve(env.mono(1, env.pi_q(-1)), "alpha");
  auto ta = alpha.solution.first_terms(3);
  CHECK(ta[0].exp.identical(env.pi_q(-1, 3)));
  CHECK(ta[1].exp.identical(env.pi_q(-1, 9)));
  CHECK(ta[2].exp.identical(env.pi_q(-1, 27)));
  CHECK(as_element_check(alpha, env.q(-1, 100)));

  CHECK_THROWS_AS(as_solve(env.mono(1, env.q(1, 3))), std::invalid_argument);
  CHECK_THROWS_AS(as_solve(env.mono(1, env.q(0))), std::invalid_argument);
  CHECK_THROWS_AS(as_solve(HahnSeries::zero(env.ctx)), std::invalid_argument);
}

TEST_CASE("conjugate sets of generator combinations") {
  Env env;
  ASElement alpha = as_solve(env.mono(1, env.pi_q(-1)), "alpha");
  ASElement beta = as_solve(env.mono(1, env.q(-4)), "beta");

  GeneratorCombo g{{ComboPart{env.mono(1, env.q(0)), alpha}, ComboPart{env.umono(env.q(0)), beta}},
                   true};
  auto conj = conjugate_set(g);
  CHECK(conj.size() == 9);
  // v(beta) = -4/3 leads v(alpha) = -pi/3.
  HahnSeries theta = combo_series(g);
  CHECK(theta.val()->identical(env.q(-4, 3)));
  // Conjugates differ from theta by constants only, so they agree on any
  // negative window.
  for (const HahnSeries& s : conj) CHECK(equal_below(s, theta, env.q(-1, 100)));

  GeneratorCombo undeclared = g;
  undeclared.disjoint = false;
  CHECK_THROWS_AS(conjugate_set(undeclared), std::invalid_argument);

  GeneratorCombo single{{ComboPart{env.mono(1, env.q(0)), alpha}}, true};
  CHECK(conjugate_set(single).size() == 3);
}

TEST_CASE("distance sets of the conjugates and the Krasner point") {
  Env env;
  ASElement alpha = as_solve(env.mono(1, env.pi_q(-1)), "alpha");
  ASElement beta = as_solve(env.mono(1, env.q(-4)), "beta");

  // Coefficients 1 and u: all 8 nonzero offsets are units, one distance 0.
  GeneratorCombo g1{{ComboPart{env.mono(1, env.q(0)), alpha}, ComboPart{env.umono(env.q(0)), beta}},
                    true};
  SThetaResult s1 = s_theta(g1);
  CHECK(s1.set.size() == 1);
  CHECK(s1.set[0].is_zero());
  CHECK(s1.multiset.size() == 8);
  CHECK(krasner_omega(g1).is_zero());

  // Coefficients 1 and t: offsets e1 + e2 t, distances {0, 1}.
  GeneratorCombo g2{{ComboPart{env.mono(1, env.q(0)), alpha}, ComboPart{env.mono(1, env.q(1)), beta}},
                    true};
  SThetaResult s2 = s_theta(g2);
  REQUIRE(s2.set.size() == 2);
  CHECK(s2.set[0].is_zero());
  CHECK(s2.set[1].identical(env.q(1)));
  CHECK(s2.multiset.size() == 8);
  int ones = 0;
  for (const auto& v : s2.multiset) ones += v.identical(env.q(1)) ? 1 : 0;
  CHECK(ones == 2);
  CHECK(krasner_omega(g2).identical(env.q(1)));

  GeneratorCombo single{{ComboPart{env.mono(1, env.q(0)), alpha}}, true};
  SThetaResult ss = s_theta(single);
  CHECK(ss.set.size() == 1);
  CHECK(ss.multiset.size() == 2);

  // Translation invariance: shifting theta by a constant leaves S_theta.
  GeneratorCombo shifted = g2;
  shifted.parts[0].coefficient = env.mono(1, env.q(0)) + env.mono(2, env.q(2));
  // offsets now include e1 (1 + 2 t^2) + e2 t: distances still {0, 1}... at
  // e1 = 0 value 1, else 0; the extra tail never leads.
  SThetaResult s3 = s_theta(shifted);
  CHECK(exps_equal(s3.set, s2.set));
}

TEST_CASE("unit-valuation battery over F_p tuples") {
  Env env;
  CHECK(ge_witness_check(env.field, {env.mono(1, env.q(0))}));
  CHECK(ge_witness_check(env.field, {env.mono(1, env.q(0)), env.umono(env.q(0))}));
  // 1 and 2 are dependent over F_3: 1*1 + 1*2 = 0.
  CHECK(!ge_witness_check(env.field, {env.mono(1, env.q(0)), env.mono(2, env.q(0))}));
  // A combination with positive valuation also fails the exact-zero test.
  CHECK(!ge_witness_check(env.field, {env.mono(1, env.q(1))}));
}

TEST_CASE("distance witness families and their cuts") {
  Env env;
  auto tower = env.tower(3);
  ASElement beta = as_solve(env.mono(1, env.q(-4)), "beta");
  ASElement alpha = as_solve(env.mono(1, env.pi_q(-1)), "alpha");

  // Approximants t^-1 * c_l with c_l = t^(-1/3) + a_l^(1/3): distances
  // -1 - 1/3^(l+1) climbing to -1.
  std::vector<Approximant> capprox;
  for (int l = 0; l < 3; ++l) {
    HahnSeries cl = env.mono(1, env.q(-1, 3)) + tower[l].solution.pth_root();
    capprox.push_back(Approximant{env.mono(1, env.q(-1)).mul(cl), 1, "t^-1*c" + std::to_string(l + 1)});
  }
  WitnessCutOptions opts;
  opts.prime = 3;
  opts.probe_depth = 3;
  opts.limit_hint = env.q(-1);
  DistanceEvalResult beta_d = distance_witnesses_eval(beta.solution, capprox, opts);
  REQUIRE(beta_d.witnesses.values.size() == 3);
  for (int l = 0; l < 3; ++l) {
    mpq_class step(-1, 9);
    for (int i = 0; i < l; ++i) step /= 3;
    CHECK(beta_d.witnesses.values[l].identical(env.q(-1) + Exponent::rational(env.basis, step)));
  }
  REQUIRE(beta_d.cut.is_principal());
  CHECK(beta_d.cut.str() == "-1^-");

  // Approximants d_l = partial sums of alpha: distances -pi/3^(l+1) with cut 0^-.
  std::vector<Approximant> dapprox;
  HahnSeries dl = HahnSeries::zero(env.ctx);
  for (int l = 1; l <= 3; ++l) {
    mpq_class e(-1, 1);
    for (int i = 0; i < l; ++i) e /= 3;
    dl = dl + env.mono(1, Exponent::single(env.basis, "pi", e));
    dapprox.push_back(Approximant{dl, 1, "d" + std::to_string(l)});
  }
  opts.limit_hint = env.q(0);
  opts.probe_depth = 2;
  DistanceEvalResult alpha_d = distance_witnesses_eval(alpha.solution, dapprox, opts);
  for (int l = 1; l <= 3; ++l) {
    mpq_class e(-1, 3);
    for (int i = 0; i < l; ++i) e /= 3;
    CHECK(alpha_d.witnesses.values[l - 1].identical(Exponent::single(env.basis, "pi", e)));
  }
  REQUIRE(alpha_d.cut.is_principal());
  CHECK(alpha_d.cut.str() == "0^-");

  // Non-monotone families are rejected.
  std::vector<Approximant> bad{Approximant{env.mono(1, env.q(-1)), 1, "x"},
                               Approximant{env.mono(1, env.q(-1)) + env.mono(1, env.q(0)), 1, "y"}};
  WitnessCutOptions plain;
  CHECK_THROWS_AS(distance_witnesses_eval(env.mono(1, env.q(2)), bad, plain),
                  std::invalid_argument);
}

TEST_CASE("reciprocal-shift distances live on their own axis") {
  // Basis with the reciprocal symbols r2, r3, r4 for p = 3.
  auto basis = BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::pi(),
                                   BasisSymbol::reciprocal_r(3, 2), BasisSymbol::reciprocal_r(3, 3),
                                   BasisSymbol::reciprocal_r(3, 4)});
  auto field = FieldSpec::make(3, 2);
  auto ctx = SeriesContext::make(basis, field);
  auto rexp = [&](int j, long num) { return Exponent::single(basis, "r" + std::to_string(j), num); };
  mpq_class third(-1, 3);
  Exponent tp = Exponent::rational(basis, third);
  HahnSeries target = HahnSeries::monomial(ctx, FFElem::one(field), tp);

  std::vector<Approximant> dl;
  for (int j = 2; j <= 4; ++j)
    dl.push_back(Approximant{target - HahnSeries::monomial(ctx, FFElem::one(field), rexp(j, -1)), 1,
                             "d" + std::to_string(j - 1)});
  WitnessCutOptions plain;
  DistanceEvalResult r = distance_witnesses_eval(target, dl, plain);
  REQUIRE(r.witnesses.values.size() == 3);
  for (int j = 2; j <= 4; ++j) CHECK(r.witnesses.values[j - 2].identical(rexp(j, -1)));
  CHECK(r.cut.kind() == Cut::Kind::witness_limit);

  // The same values fail membership in the level lattices spanned by the
  // earlier axes only.
  std::vector<ValueLattice> lat;
  lat.push_back(ValueLattice(basis, {Exponent::rational(basis, mpq_class(1, 3)),
                                     Exponent::single(basis, "pi", mpq_class(1, 3))}));
  lat.push_back(ValueLattice(basis, {Exponent::rational(basis, mpq_class(1, 3)), rexp(2, 1)}));
  lat.push_back(ValueLattice(basis, {Exponent::rational(basis, mpq_class(1, 3)), rexp(3, 1)}));
  DistanceEvalResult r2 = distance_witnesses_eval(target, dl, plain, std::nullopt, &lat);
  REQUIRE(r2.outside_lattice.size() == 3);
  for (bool b : r2.outside_lattice) CHECK(b);
}

TEST_CASE("approximant chain verification and depth") {
  Env env;
  auto tower = env.tower(3);
  ASElement beta = as_solve(env.mono(1, env.q(-4)), "beta");
  ASElement alpha = as_solve(env.mono(1, env.pi_q(-1)), "alpha");
  GeneratorCombo g{{ComboPart{env.mono(1, env.q(0)), alpha}, ComboPart{env.umono(env.q(0)), beta}},
                   true};
  HahnSeries theta = combo_series(g);

  // d_l partial sums of alpha and the c_l family assembled per level.
  std::vector<HahnSeries> dls;
  HahnSeries dl = HahnSeries::zero(env.ctx);
  for (int l = 1; l <= 3; ++l) {
    mpq_class e(-1, 1);
    for (int i = 0; i < l; ++i) e /= 3;
    dl = dl + env.mono(1, Exponent::single(env.basis, "pi", e));
    dls.push_back(dl);
  }
  OkutsuLevel level0{{}, 1, false};
  OkutsuLevel level1{{}, 3, false};
  for (int l = 0; l < 3; ++l) {
    HahnSeries cl = env.mono(1, env.q(-1, 3)) + tower[l].solution.pth_root();
    HahnSeries ucl = env.umono(env.q(-1)).mul(cl);
    level0.members.push_back(Approximant{dls[l] + ucl, 1, "b" + std::to_string(l + 1)});
    level1.members.push_back(
        Approximant{env.umono(env.q(0)).mul(beta.solution) + dls[l], 3, "e" + std::to_string(l + 1)});
  }
  OkutsuLevel top{{Approximant{theta, 9, "theta"}}, 9, true};
  OkutsuCandidate cand{{level0, level1, top}};

  std::vector<Approximant> challenge;
  {
    HahnSeries c1 = env.mono(1, env.q(-1, 3)) + tower[0].solution.pth_root();
    challenge.push_back(Approximant{env.umono(env.q(-1)).mul(c1), 1, "naked-c1"});
    challenge.push_back(Approximant{env.umono(env.q(0)).mul(beta.solution), 3, "naked-ubeta"});
  }
  OkutsuReport rep = okutsu_verify(cand, theta, challenge);
  CHECK(rep.ok);
  CHECK(rep.depth == 2);
  REQUIRE(rep.level_values.size() == 2);
  CHECK(rep.level_values[0][0].identical(env.q(-10, 9)));
  CHECK(rep.level_values[1][0].identical(env.pi_q(-1, 9)));
  for (auto& [label, ok] : rep.challenge_results) CHECK(ok);

  // A candidate whose second level sits at the wrong distance fails the
  // between-level ordering.
  OkutsuCandidate bad{{level1, top}};
  bad.levels[0].degree = 1;
  OkutsuReport rep2 = okutsu_verify(bad, theta, {});
  CHECK(rep2.depth == 1);

  OkutsuCandidate chain_bad{{level0, level0, top}};
  OkutsuReport rep3 = okutsu_verify(chain_bad, theta, {});
  CHECK(!rep3.ok);

  // Challenges past the sampled distances are reported.
  std::vector<Approximant> beating{Approximant{level0.members[2].series, 1, "deep"}};
  OkutsuCandidate shallow{{OkutsuLevel{{level0.members[0]}, 1, false}, top}};
  OkutsuReport rep4 = okutsu_verify(shallow, theta, beating);
  CHECK(!rep4.ok);
  REQUIRE(rep4.challenge_results.size() == 1);
  CHECK(!rep4.challenge_results[0].second);
}

TEST_CASE("tame multiset prediction") {
  Env env;
  Exponent g = env.q(1, 3);
  auto m1 = tame_multiset_predict(4, {1, 4}, {g});
  CHECK(m1.size() == 3);
  for (const auto& v : m1) CHECK(v.identical(g));
  auto m2 = tame_multiset_predict(6, {1, 2, 6}, {g, env.q(1)});
  REQUIRE(m2.size() == 5);
  int first = 0;
  for (const auto& v : m2) first += v.identical(g) ? 1 : 0;
  CHECK(first == 3);
  auto m3 = tame_multiset_predict(9, {1, 3, 9}, {g, env.q(1)});
  CHECK(m3.size() == 8);
  CHECK_THROWS_AS(tame_multiset_predict(6, {1, 4, 6}, {g, g}), std::invalid_argument);
  CHECK_THROWS_AS(tame_multiset_predict(6, {2, 6}, {g}), std::invalid_argument);
  CHECK_THROWS_AS(tame_multiset_predict(6, {1, 2, 6}, {g}), std::invalid_argument);

  std::mt19937_64 rng(6021);
  std::uniform_int_distribution<int> factor(0, 2);
  static const int fs[] = {2, 3, 5};
  for (int i = 0; i < 100; ++i) {
    std::vector<int> degrees{1};
    for (int s = 0, r = 1 + i % 3; s < r; ++s) degrees.push_back(degrees.back() * fs[factor(rng)]);
    int n = degrees.back();
    std::vector<Exponent> deltas(degrees.size() - 1, env.q(i, 7));
    CHECK(static_cast<int>(tame_multiset_predict(n, degrees, deltas).size()) == n - 1);
  }
}

TEST_CASE("divided-power derivatives of polynomials") {
  Env env;
  HahnSeries zero = HahnSeries::zero(env.ctx);
  HahnSeries one = env.mono(1, env.q(0));
  // d_1 of x^3 in characteristic 3 vanishes.
  SeriesPoly cube = poly_make(env.ctx, {zero, zero, zero, one});
  for (const HahnSeries& cf : hasse_schmidt(cube, 1).coeffs) CHECK(!cf.val().has_value());
  for (const HahnSeries& cf : hasse_schmidt(cube, 2).coeffs) CHECK(!cf.val().has_value());
  // d_1 of x^2 is 2x.
  SeriesPoly sq = poly_make(env.ctx, {zero, zero, one});
  auto d1 = hasse_schmidt(sq, 1);
  REQUIRE(d1.coeffs.size() == 2);
  CHECK(!d1.coeffs[0].val().has_value());
  CHECK(d1.coeffs[1].leading()->coef.str() == "2");

  // Taylor identity f(x + h) = sum_s d_s f(x) h^s on random finite data.
  std::mt19937_64 rng(910);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> degd(0, 6);
    int deg = degd(rng);
    std::vector<HahnSeries> cs;
    for (int i = 0; i <= deg; ++i) cs.push_back(env.random_finite(rng));
    SeriesPoly f = poly_make(env.ctx, cs);
    HahnSeries x = env.random_finite(rng);
    HahnSeries h = env.random_finite(rng);
    HahnSeries lhs = poly_eval(f, x + h);
    HahnSeries rhs = HahnSeries::zero(env.ctx);
    HahnSeries hpow = env.mono(1, env.q(0));
    for (int s = 0; s <= deg; ++s) {
      rhs = rhs + poly_eval(hasse_schmidt(f, s), x).mul(hpow);
      hpow = hpow.mul(h);
    }
    CHECK(equal_below(lhs, rhs, env.q(1000)));
  }
}
