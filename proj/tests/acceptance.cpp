// Acceptance gate: one line per criterion, PASS or FAIL with a short
// reason.  The exit status is the number of failed criteria, so a zero exit
// means the whole battery is green.
//
// Criteria 1, 2, 7 and 8 recompute their claims directly against the kernel
// API.  Criteria 3-6 read the scenario reports and require the relevant
// checks to pass by id, so the gate stays in sync with the registry the CLI
// serves.  Criterion 5 pins two right-hand sides that the mechanical group
// law contradicts; the gate reports that mismatch as an honest failure
// rather than weakening the check.

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hahnlab/errors.hpp"
#include "hahnlab/extensions.hpp"
#include "hahnlab/lattice.hpp"
#include "hahnlab/paperlab.hpp"
#include "hahnlab/series.hpp"

using namespace hahnlab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

mpq_class frac(long num, long den) {
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}

mpz_class zpow(long base, int e) {
  mpz_class r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct Criterion {
  int number;
  std::string summary;
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    notes.push_back(what);
  }
};

void time_gate(Criterion& c, double elapsed, double limit) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << elapsed << "s";
  c.require(elapsed < limit, "runtime " + os.str() + " exceeds the " +
                                 std::to_string(static_cast<int>(limit)) + "s bound");
}

const CheckResult* check_by_id(const Report& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return &c;
  return nullptr;
}

void require_check(Criterion& c, const Report& r, const std::string& id) {
  const CheckResult* ck = check_by_id(r, id);
  if (!ck) {
    c.require(false, r.scenario + "/" + id + " missing from the report");
    return;
  }
  if (ck->status == CheckStatus::pass) return;
  c.require(false, r.scenario + "/" + id + ": expected [" + ck->expected + "], computed [" +
                       ck->computed + "]");
}

// ---------------------------------------------------------------------------
// Criterion 1: the two distance families of the first construction, exact.

void criterion1(Criterion& c) {
  Clock::time_point start = Clock::now();
  BasisPtr basis = BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::pi()});
  FieldPtr field = FieldSpec::make(3, 2);
  SeriesCtxPtr ctx = SeriesContext::make(basis, field);
  auto rat = [&](const mpq_class& q) { return Exponent::rational(basis, q); };
  auto pim = [&](const mpq_class& q) { return Exponent::single(basis, "pi", q); };
  auto mono = [&](const Exponent& e) { return HahnSeries::monomial(ctx, FFElem::one(field), e); };

  std::vector<ASElement> tower{as_solve(mono(rat(-1)), "a1")};
  for (int l = 1; l < 5; ++l)
    tower.push_back(as_solve(-tower.back().solution, "a" + std::to_string(l + 1)));
  ASElement alpha = as_solve(mono(pim(-1)), "alpha");
  ASElement beta = as_solve(mono(rat(-4)), "beta");

  int good = 0;
  for (int l = 1; l <= 5; ++l) {
    // Approximant to beta at level l: t^-1 * (t^(-1/3) + a_l^(1/3)).
    HahnSeries c_l = mono(rat(frac(-1, 3))) + tower[l - 1].solution.pth_root();
    HahnSeries approx_b = c_l.mul(mono(rat(-1)));
    std::optional<Exponent> vb = (beta.solution - approx_b).val();
    Exponent want_b = rat(-1 - frac(1, zpow(3, l + 1).get_si()));
    if (vb.has_value() && vb->identical(want_b)) ++good;
    else c.require(false, "level " + std::to_string(l) + ": v(beta - t^-1 c_l) mismatch");

    // Approximant to alpha at level l: the partial sum of t^(-pi/3^j).
    std::vector<Term> ps;
    for (int j = 1; j <= l; ++j)
      ps.push_back(Term{pim(-frac(1, zpow(3, j).get_si())), FFElem::one(field)});
    HahnSeries d_l = HahnSeries::from_terms(ctx, ps);
    std::optional<Exponent> va = (alpha.solution - d_l).val();
    Exponent want_a = pim(-frac(1, zpow(3, l + 1).get_si()));
    if (va.has_value() && va->identical(want_a)) ++good;
    else c.require(false, "level " + std::to_string(l) + ": v(alpha - d_l) mismatch");
  }
  c.summary = std::to_string(good) + "/10 distance values coordinate-equal, levels 1..5";
  time_gate(c, seconds_since(start), 2.0);
}

// ---------------------------------------------------------------------------
// Criterion 2: lattice membership battery for the level value groups.

void criterion2(Criterion& c) {
  Clock::time_point start = Clock::now();
  std::vector<BasisSymbol> syms{BasisSymbol::exact("1", 1), BasisSymbol::pi()};
  for (unsigned j = 2; j <= 6; ++j) syms.push_back(BasisSymbol::reciprocal_r(3, j));
  BasisPtr basis = BasisContext::make(syms);
  auto rat = [&](const mpq_class& q) { return Exponent::rational(basis, q); };
  auto pim = [&](const mpq_class& q) { return Exponent::single(basis, "pi", q); };
  auto rrec = [&](int j, const mpq_class& s) {
    return Exponent::single(basis, "r" + std::to_string(j), s);
  };

  int outside = 0, inside = 0;
  for (int l = 1; l <= 4; ++l) {
    std::vector<Exponent> gens{pim(frac(1, zpow(3, l).get_si())), rat(frac(1, 3))};
    for (int j = 2; j <= l; ++j) gens.push_back(rrec(j, 1));
    gens.push_back(rrec(l + 1, 3));
    ValueLattice lat(basis, gens);
    for (const Exponent& g : gens) {
      if (lat.contains(g)) ++inside;
      else c.require(false, "level " + std::to_string(l) + ": declared generator rejected");
    }
    Exponent w1 = pim(-frac(1, zpow(3, l + 1).get_si()));
    Exponent w2 = rrec(l + 1, -1);
    if (!lat.contains(w1)) ++outside;
    else c.require(false, "level " + std::to_string(l) + ": -pi/3^(l+1) wrongly admitted");
    if (!lat.contains(w2)) ++outside;
    else c.require(false, "level " + std::to_string(l) + ": -1/r_(l+1) wrongly admitted");
  }
  c.summary = std::to_string(outside) + "/8 witness values outside their level lattice, " +
              std::to_string(inside) + "/18 declared generators inside";
  time_gate(c, seconds_since(start), 2.0);
}

// ---------------------------------------------------------------------------
// Criteria 3-6 read the scenario reports.

void criterion3(Criterion& c, const Report& ex, const Report& mon) {
  require_check(c, ex, "conjugates");
  require_check(c, ex, "s-theta");
  require_check(c, mon, "s-theta");
  c.summary = "conjugate-difference sets: one-element set over 9 conjugates, "
              "then the two-element set {0, 1}";
}

void criterion4(Criterion& c, const Report& ex, const Report& mon) {
  require_check(c, ex, "depth-evidence");
  require_check(c, mon, "depth-evidence");
  require_check(c, mon, "kaplansky-window");
  c.summary = "depth 2 then depth 1 chains verified with challenge batteries and "
              "truncation-overflow obstructions (necessary-condition evidence on "
              "sampled witnesses, not a universal proof)";
}

void criterion5(Criterion& c, const Report& asd, double elapsed) {
  require_check(c, asd, "group-law");
  require_check(c, asd, "lemma-iv-verbatim");
  require_check(c, asd, "iota-witness-values");
  c.summary = "order-27 model: group law and exhaustive associativity hold; two "
              "pinned right-hand sides disagree with the mechanical computation";
  time_gate(c, elapsed, 10.0);
}

void criterion6(Criterion& c, const Report& ram, const Report& asd) {
  require_check(c, ram, "ih-first");
  require_check(c, ram, "ih-second");
  require_check(c, ram, "ram-vs-depth");
  require_check(c, asd, "subgroup-ideals");
  c.summary = "segment formulas give {v > 0} and {v > 1}; two-element ramification "
              "set against depth 1; one-element set across all 18 subgroups of the "
              "order-27 model";
}

// ---------------------------------------------------------------------------
// Criterion 7: randomized law suites, 1000 cases each, fixed seeds.

struct PropertyEnv {
  BasisPtr basis;
  FieldPtr field;
  SeriesCtxPtr ctx;

  PropertyEnv() {
    basis = BasisContext::make(
        {BasisSymbol::exact("1", 1), BasisSymbol::pi(), BasisSymbol::reciprocal_r(3, 2)});
    field = FieldSpec::make(3, 2);
    ctx = SeriesContext::make(basis, field);
  }

  Exponent rand_exp(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> num(-8, 8);
    std::uniform_int_distribution<int> pick(0, 3);
    static const int dens[] = {1, 2, 3, 9};
    Exponent e = Exponent::rational(basis, frac(num(rng), dens[pick(rng)]));
    if (pick(rng) != 0)
      e = e + Exponent::single(basis, "pi", frac(num(rng), dens[pick(rng)]));
    return e;
  }

  FFElem rand_nonzero(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> idx(1, 8);
    return FFElem::from_index(field, idx(rng));
  }

  HahnSeries rand_series(std::mt19937_64& rng, int min_terms, int max_terms) const {
    std::uniform_int_distribution<int> count(min_terms, max_terms);
    int n = count(rng);
    std::vector<Exponent> exps;
    while (static_cast<int>(exps.size()) < n) {
      Exponent e = rand_exp(rng);
      bool dup = false;
      for (const auto& o : exps) dup = dup || o.identical(e);
      if (!dup) exps.push_back(e);
    }
    std::sort(exps.begin(), exps.end(), [](const Exponent& a, const Exponent& b) { return a.lt(b); });
    std::vector<Term> ts;
    for (const auto& e : exps) ts.push_back(Term{e, rand_nonzero(rng)});
    if (ts.empty()) return HahnSeries::zero(ctx);
    return HahnSeries::from_terms(ctx, ts);
  }
};

using Suite = std::function<int(const PropertyEnv&, std::mt19937_64&)>;

int suite_ultrametric(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    HahnSeries a = env.rand_series(rng, 1, 4);
    HahnSeries b = env.rand_series(rng, 1, 4);
    Exponent va = *a.val(), vb = *b.val();
    Exponent lo = va.lt(vb) ? va : vb;
    std::optional<Exponent> vs = (a + b).val();
    if (!vs.has_value()) {
      // Total cancellation needs equal leading exponents.
      if (!va.identical(vb)) ++bad;
      continue;
    }
    if (vs->lt(lo)) ++bad;
    if (!va.identical(vb) && !vs->identical(lo)) ++bad;
  }
  return bad;
}

int suite_multiplicativity(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    HahnSeries a = env.rand_series(rng, 1, 3);
    HahnSeries b = env.rand_series(rng, 1, 3);
    std::optional<Exponent> vp = a.mul(b).val();
    if (!vp.has_value() || !vp->identical(*a.val() + *b.val())) ++bad;
  }
  return bad;
}

int suite_as_additivity(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  Exponent window = Exponent::rational(env.basis, frac(-1, 50));
  std::uniform_int_distribution<int> num(1, 6);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> axis(0, 1);
  auto neg_exp = [&](std::mt19937_64& r) {
    mpq_class q = -frac(num(r), den(r));
    if (axis(r) == 0) return Exponent::rational(env.basis, q);
    return Exponent::single(env.basis, "pi", q);
  };
  for (int i = 0; i < 1000; ++i) {
    Exponent e1 = neg_exp(rng);
    Exponent e2 = neg_exp(rng);
    while (e2.identical(e1)) e2 = neg_exp(rng);
    HahnSeries r1 = HahnSeries::monomial(env.ctx, env.rand_nonzero(rng), e1);
    HahnSeries r2 = HahnSeries::monomial(env.ctx, env.rand_nonzero(rng), e2);
    HahnSeries joint = as_solve(r1 + r2).solution;
    HahnSeries split = as_solve(r1).solution + as_solve(r2).solution;
    if (!equal_below(joint, split, window)) ++bad;
  }
  return bad;
}

int suite_truncation(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  Exponent top = Exponent::rational(env.basis, 100);
  auto same = [](const std::vector<Term>& x, const std::vector<Term>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!x[i].exp.identical(y[i].exp) || x[i].coef != y[i].coef) return false;
    return true;
  };
  for (int i = 0; i < 1000; ++i) {
    HahnSeries s = env.rand_series(rng, 1, 5);
    Exponent b1 = env.rand_exp(rng);
    Exponent b2 = env.rand_exp(rng);
    if (b2.lt(b1)) std::swap(b1, b2);  // b1 <= b2
    HahnSeries t = s.truncate(b1);
    if (!same(t.truncate(b1).terms_below(top), t.terms_below(top))) ++bad;
    if (!same(s.truncate(b2).truncate(b1).terms_below(top), t.terms_below(top))) ++bad;
    for (const Term& term : t.terms_below(top))
      if (!term.exp.lt(b1)) ++bad;
  }
  return bad;
}

int suite_frobenius(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  std::uniform_int_distribution<int> idx(0, 8);
  for (int i = 0; i < 1000; ++i) {
    FFElem x = FFElem::from_index(env.field, idx(rng));
    FFElem y = FFElem::from_index(env.field, idx(rng));
    if (x.frobenius().frobenius_inverse() != x) ++bad;
    if (x.frobenius_inverse().frobenius() != x) ++bad;
    if ((x + y).frobenius() != x.frobenius() + y.frobenius()) ++bad;
    if ((x * y).frobenius() != x.frobenius() * y.frobenius()) ++bad;
    HahnSeries s = env.rand_series(rng, 1, 3);
    std::vector<Term> round = s.pth_power_termwise().pth_root().first_terms(4);
    std::vector<Term> orig = s.first_terms(4);
    if (round.size() != orig.size()) ++bad;
    for (std::size_t k = 0; k < round.size() && k < orig.size(); ++k)
      if (!round[k].exp.identical(orig[k].exp) || round[k].coef != orig[k].coef) ++bad;
  }
  return bad;
}

int suite_exp_order(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    Exponent a = env.rand_exp(rng);
    Exponent b = env.rand_exp(rng);
    Exponent c = env.rand_exp(rng);
    int ab = a.cmp(b), bc = b.cmp(c), ac = a.cmp(c);
    if (ab != -b.cmp(a)) ++bad;
    if (a.cmp(a) != 0) ++bad;
    if (ab != (a + c).cmp(b + c)) ++bad;
    if (ab != (a - b).sign()) ++bad;
    if (ab < 0 && bc < 0 && ac >= 0) ++bad;
    if (ab > 0 && bc > 0 && ac <= 0) ++bad;
    if (ab == 0 && !a.identical(b)) ++bad;  // independence: equal reals, equal vectors
  }
  return bad;
}

int suite_lattice(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  std::uniform_int_distribution<int> coord(-3, 3);
  std::uniform_int_distribution<int> gen_count(1, 3);
  std::uniform_int_distribution<int> comb(-20, 20);
  std::uniform_int_distribution<int> axis(0, 2);
  static const char* names[] = {"1", "pi", "r2"};
  auto int_exp = [&](std::mt19937_64& r) {
    Exponent e = Exponent::rational(env.basis, coord(r));
    e = e + Exponent::single(env.basis, "pi", coord(r));
    e = e + Exponent::single(env.basis, "r2", coord(r));
    return e;
  };
  for (int i = 0; i < 1000; ++i) {
    std::vector<Exponent> gens;
    int n = gen_count(rng);
    for (int k = 0; k < n; ++k) gens.push_back(int_exp(rng));
    ValueLattice lat(env.basis, gens);
    // A constructed integer combination must be admitted.
    Exponent member = Exponent::zero(env.basis);
    for (const auto& g : gens) member = member + g.scaled(comb(rng));
    if (!lat.contains(member)) ++bad;
    for (const auto& g : gens)
      if (!lat.contains(g)) ++bad;
    // All generator coordinates are integers, so shifting any axis by 1/2
    // leaves the lattice: an exact non-membership oracle.
    Exponent outside = member + Exponent::single(env.basis, names[axis(rng)], frac(1, 2));
    if (lat.contains(outside)) ++bad;
  }
  return bad;
}

int suite_hasse_schmidt(const PropertyEnv& env, std::mt19937_64& rng) {
  int bad = 0;
  Exponent top = Exponent::rational(env.basis, 1000);
  std::uniform_int_distribution<int> deg(0, 6);
  auto materialize = [&](const HahnSeries& s) {
    return HahnSeries::from_terms(env.ctx, s.terms_below(top));
  };
  for (int i = 0; i < 1000; ++i) {
    int d = deg(rng);
    std::vector<HahnSeries> coeffs;
    for (int k = 0; k <= d; ++k) coeffs.push_back(env.rand_series(rng, 0, 2));
    SeriesPoly f = poly_make(env.ctx, coeffs);
    HahnSeries x = env.rand_series(rng, 0, 2);
    HahnSeries y = env.rand_series(rng, 0, 2);
    HahnSeries xy = materialize(x + y);
    HahnSeries lhs = poly_eval(f, xy);
    // Taylor expansion via divided-power derivatives: f(x+y) = sum_s d_s f(x) y^s.
    HahnSeries rhs = HahnSeries::zero(env.ctx);
    HahnSeries ypow = HahnSeries::monomial(env.ctx, FFElem::one(env.field),
                                           Exponent::zero(env.basis));
    for (int s = 0; s <= d; ++s) {
      rhs = rhs + poly_eval(hasse_schmidt(f, s), x).mul(ypow);
      ypow = materialize(ypow.mul(y));
      if (!ypow.val().has_value()) break;  // y = 0: higher powers contribute nothing
    }
    if ((lhs - rhs).val().has_value()) ++bad;
  }
  return bad;
}

void criterion7(Criterion& c) {
  Clock::time_point start = Clock::now();
  PropertyEnv env;
  const std::vector<std::pair<std::string, Suite>> suites{
      {"ultrametric", suite_ultrametric},
      {"multiplicativity", suite_multiplicativity},
      {"as-additivity", suite_as_additivity},
      {"truncation", suite_truncation},
      {"frobenius", suite_frobenius},
      {"exp-order", suite_exp_order},
      {"lattice-oracle", suite_lattice},
      {"taylor", suite_hasse_schmidt},
  };
  std::uint64_t seed = 20260823;
  int green = 0;
  for (const auto& [name, suite] : suites) {
    std::mt19937_64 rng(seed++);
    int bad = 0;
    try {
      bad = suite(env, rng);
    } catch (const std::exception& e) {
      c.require(false, name + ": " + e.what());
      continue;
    }
    if (bad == 0) ++green;
    else c.require(false, name + ": " + std::to_string(bad) + " failing cases");
  }
  c.summary = std::to_string(green) + "/8 randomized law suites clean, 1000 cases each";
  time_gate(c, seconds_since(start), 30.0);
}

// ---------------------------------------------------------------------------
// Criterion 8: predicted tame multisets have cardinality n - 1.

void criterion8(Criterion& c) {
  BasisPtr basis = BasisContext::make({BasisSymbol::exact("1", 1), BasisSymbol::pi()});
  std::mt19937_64 rng(881);
  std::uniform_int_distribution<int> steps(1, 4);
  std::uniform_int_distribution<int> pick(0, 3);
  static const int factors[] = {2, 3, 5, 7};
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<int> degrees{1};
    int r = steps(rng);
    for (int s = 0; s < r; ++s) degrees.push_back(degrees.back() * factors[pick(rng)]);
    int n = degrees.back();
    std::vector<Exponent> deltas;
    for (int s = 0; s < r; ++s)
      deltas.push_back(Exponent::rational(basis, frac(s + 1 + (i % 5), 7)));
    if (static_cast<int>(tame_multiset_predict(n, degrees, deltas).size()) == n - 1) ++good;
  }
  c.require(good == 100, std::to_string(100 - good) + " chains off the predicted cardinality");
  c.summary = std::to_string(good) + "/100 random divisor chains at cardinality n - 1";
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  auto run = [&](int number, const std::function<void(Criterion&)>& body) {
    Criterion c;
    c.number = number;
    try {
      body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("unexpected error: ") + e.what());
      if (c.summary.empty()) c.summary = "aborted";
    }
    results.push_back(c);
  };

  run(1, criterion1);
  run(2, criterion2);

  Report ex, mon, ram, asd;
  double asd_elapsed = 0;
  bool reports_ok = true;
  try {
    ScenarioConfig cfg;
    ex = run_scenario("example-5-1-1", cfg);
    mon = run_scenario("monster-5-2", cfg);
    ram = run_scenario("ramif-6-2", cfg);
    Clock::time_point t0 = Clock::now();
    asd = run_scenario("asd-6-3", cfg);
    asd_elapsed = seconds_since(t0);
  } catch (const std::exception& e) {
    reports_ok = false;
    for (int n : {3, 4, 5, 6}) {
      Criterion c;
      c.number = n;
      c.summary = "scenario run failed";
      c.require(false, e.what());
      results.push_back(c);
    }
  }
  if (reports_ok) {
    run(3, [&](Criterion& c) { criterion3(c, ex, mon); });
    run(4, [&](Criterion& c) { criterion4(c, ex, mon); });
    run(5, [&](Criterion& c) { criterion5(c, asd, asd_elapsed); });
    run(6, [&](Criterion& c) { criterion6(c, ram, asd); });
  }

  run(7, criterion7);
  run(8, criterion8);

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.number < b.number; });
  int failed = 0;
  for (const Criterion& c : results) {
    if (!c.ok) ++failed;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion-" << c.number << ": " << c.summary
              << "\n";
    for (const std::string& note : c.notes) std::cout << "      - " << note << "\n";
  }
  std::cout << "acceptance: " << (results.size() - failed) << "/" << results.size()
            << " criteria passed\n";
  return failed;
}
