#include "hahnlab/extensions.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {

namespace {

// First term of s with exponent below the window, or of the whole stream
// when no window is given.
std::optional<Term> leading_below(const HahnSeries& s, const std::optional<Exponent>& window) {
  if (!window) return s.leading();
  auto terms = s.truncate(*window).first_terms(1);
  if (terms.empty()) return std::nullopt;
  return terms[0];
}

}  // namespace

Exponent val_in_window(const HahnSeries& s, const std::optional<Exponent>& window,
                       const std::string& what) {
  auto t = leading_below(s, window);
  if (!t) throw std::invalid_argument(what + (window ? " has no support below the window"
                                                     : " is the zero series"));
  return t->exp;
}

Cut distance_cut(const BasisPtr& basis, const DistanceWitnesses& w,
                 const WitnessCutOptions& opts) {
  const auto& vals = w.values;
  WitnessCutOptions capped = opts;
  capped.attained = w.attained;
  capped.sample_depth = std::min(capped.sample_depth, static_cast<int>(vals.size()));
  return cut_from_witnesses(
      basis,
      [&vals](int k) -> std::optional<Exponent> {
        if (k < static_cast<int>(vals.size())) return vals[k];
        return std::nullopt;
      },
      capped);
}

// ---------------------------------------------------------------------------
// Artin-Schreier roots

HahnSeries as_weighted_sum(const HahnSeries& rhs, const std::function<FFElem(int)>& weight) {
  auto v = rhs.val();
  if (!v || v->sign() >= 0)
    throw std::invalid_argument("as_weighted_sum needs a right-hand side of negative valuation");
  // Child k is the (k+1)-th root with a nonzero weight.  Valuations
  // v(rhs)/p^m strictly increase toward zero, so skipping zero weights keeps
  // the stream strictly increasing.
  return HahnSeries::sum_many(rhs.ctx(), [rhs, weight](int k) -> std::optional<HahnSeries> {
    int m = 0;
    int remaining = k + 1;
    int zero_run = 0;
    while (remaining > 0) {
      ++m;
      if (weight(m).is_zero()) {
        if (++zero_run >= 64) return std::nullopt;
        continue;
      }
      zero_run = 0;
      --remaining;
    }
    HahnSeries child = rhs;
    for (int j = 0; j < m; ++j) child = child.pth_root();
    return child.scale(weight(m));
  });
}

ASElement as_solve(const HahnSeries& rhs, std::string label) {
  auto v = rhs.val();
  if (!v || v->sign() >= 0)
    throw std::invalid_argument("as_solve needs a right-hand side of negative valuation");
  // x = sum of rhs^(1/p^j), j >= 1: then x^p = rhs + x termwise, so
  // x^p - x = rhs.  Valuations v(rhs)/p^j strictly increase toward zero.
  const FieldPtr field = rhs.ctx()->field;
  HahnSeries solution = as_weighted_sum(rhs, [field](int) { return FFElem::one(field); });
  return ASElement{rhs, std::move(solution), std::move(label)};
}

bool as_element_check(const ASElement& e, const Exponent& below) {
  return equal_below(as_operator(e.solution, below), e.rhs, below);
}

// ---------------------------------------------------------------------------
// Generator combinations and conjugates

HahnSeries combo_series(const GeneratorCombo& g) {
  if (g.parts.empty()) throw std::invalid_argument("empty generator combination");
  const SeriesCtxPtr& ctx = g.parts[0].element.solution.ctx();
  HahnSeries total = HahnSeries::zero(ctx);
  for (const ComboPart& part : g.parts) {
    if (!part.coefficient.known_finite())
      throw std::invalid_argument("combination coefficients must have finite support");
    // A finite coefficient times a lazy root: distribute one monomial at a
    // time so no convolution window is needed.
    for (const Term& t : part.coefficient.first_terms(
             static_cast<int>(part.coefficient.ctx()->term_budget))) {
      HahnSeries mono = HahnSeries::monomial(ctx, t.coef, t.exp);
      total = total + mono.mul(part.element.solution);
    }
  }
  return total;
}

namespace {

// Offsets sum e_i * coefficient_i over all tuples e in F_p^n, zero tuple
// first.  These are exactly the conjugate differences.
std::vector<HahnSeries> conjugate_offsets(const GeneratorCombo& g) {
  if (g.parts.empty()) throw std::invalid_argument("empty generator combination");
  const SeriesCtxPtr& ctx = g.parts[0].element.solution.ctx();
  unsigned p = ctx->field->p();
  std::size_t n = g.parts.size();
  std::vector<unsigned> tuple(n, 0);
  std::vector<HahnSeries> offsets;
  while (true) {
    HahnSeries off = HahnSeries::zero(ctx);
    for (std::size_t i = 0; i < n; ++i)
      if (tuple[i] != 0)
        off = off + g.parts[i].coefficient.scale(
                        FFElem::from_int(ctx->field, static_cast<long>(tuple[i])));
    offsets.push_back(std::move(off));
    std::size_t i = 0;
    while (i < n && ++tuple[i] == p) tuple[i++] = 0;
    if (i == n) break;
  }
  return offsets;
}

}  // namespace

std::vector<HahnSeries> conjugate_set(const GeneratorCombo& g) {
  if (!g.disjoint)
    throw std::invalid_argument("conjugate enumeration needs the declared disjointness");
  for (const ComboPart& part : g.parts)
    if (!part.coefficient.known_finite())
      throw std::invalid_argument("combination coefficients must have finite support");
  HahnSeries theta = combo_series(g);
  std::vector<HahnSeries> out;
  for (const HahnSeries& off : conjugate_offsets(g)) out.push_back(theta + off);
  return out;
}

SThetaResult s_theta(const GeneratorCombo& g) {
  if (!g.disjoint)
    throw std::invalid_argument("conjugate enumeration needs the declared disjointness");
  SThetaResult r;
  std::vector<HahnSeries> offsets = conjugate_offsets(g);
  for (std::size_t i = 1; i < offsets.size(); ++i) {  // skip the zero tuple
    auto v = offsets[i].val();
    if (!v)
      throw std::invalid_argument(
          "a conjugate offset vanishes; the coefficients are not independent");
    r.multiset.push_back(*v);
  }
  auto by_order = [](const Exponent& a, const Exponent& b) { return a.cmp(b) < 0; };
  std::sort(r.multiset.begin(), r.multiset.end(), by_order);
  for (const Exponent& v : r.multiset)
    if (r.set.empty() || !r.set.back().identical(v)) r.set.push_back(v);
  return r;
}

Exponent krasner_omega(const GeneratorCombo& g) {
  SThetaResult s = s_theta(g);
  if (s.set.empty()) throw std::invalid_argument("empty distance set");
  return s.set.back();
}

bool ge_witness_check(const FieldPtr& field, const std::vector<HahnSeries>& coeffs) {
  if (coeffs.empty()) return true;
  unsigned p = field->p();
  std::size_t n = coeffs.size();
  const SeriesCtxPtr& ctx = coeffs[0].ctx();
  std::vector<unsigned> tuple(n, 0);
  while (true) {
    std::size_t i = 0;
    while (i < n && ++tuple[i] == p) tuple[i++] = 0;
    if (i == n) break;  // wrapped to the zero tuple: done
    HahnSeries sum = HahnSeries::zero(ctx);
    for (std::size_t k = 0; k < n; ++k)
      if (tuple[k] != 0)
        sum = sum + coeffs[k].scale(FFElem::from_int(field, static_cast<long>(tuple[k])));
    auto v = sum.val();
    if (!v || !v->is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Distance witnesses

DistanceEvalResult distance_witnesses_eval(const HahnSeries& theta,
                                           std::vector<Approximant> approximants,
                                           const WitnessCutOptions& cut_opts,
                                           const std::optional<Exponent>& window,
                                           const std::vector<ValueLattice>* lattices) {
  if (approximants.empty()) throw std::invalid_argument("no approximants");
  if (lattices && lattices->size() != approximants.size())
    throw std::invalid_argument("lattice family must match the approximant family");
  DistanceEvalResult r{DistanceWitnesses{}, Cut::minus_infinity(theta.ctx()->basis), {}};
  r.witnesses.attained = cut_opts.attained;
  for (const Approximant& a : approximants) {
    Exponent v = val_in_window(theta - a.series, window, "difference theta - " + a.label);
    if (!cut_opts.attained && !r.witnesses.values.empty() &&
        v.cmp(r.witnesses.values.back()) <= 0)
      throw std::invalid_argument("distance values must strictly increase along the family");
    if (lattices) r.outside_lattice.push_back(!(*lattices)[r.witnesses.values.size()].contains(v));
    r.witnesses.values.push_back(std::move(v));
  }
  r.witnesses.approximants = std::move(approximants);
  r.cut = distance_cut(theta.ctx()->basis, r.witnesses, cut_opts);
  return r;
}

// ---------------------------------------------------------------------------
// Okutsu candidate verification

OkutsuReport okutsu_verify(const OkutsuCandidate& cand, const HahnSeries& theta,
                           const std::vector<Approximant>& challenge,
                           const std::optional<Exponent>& window) {
  OkutsuReport rep;
  const auto& levels = cand.levels;
  if (levels.size() < 2) {
    rep.failures.push_back("a candidate needs at least the degree-1 level and theta itself");
    return rep;
  }
  rep.depth = static_cast<int>(levels.size()) - 1;

  if (levels.front().degree != 1)
    rep.failures.push_back("degree chain must start at 1");
  for (std::size_t l = 1; l < levels.size(); ++l)
    if (levels[l].degree <= levels[l - 1].degree)
      rep.failures.push_back("degree chain must strictly increase at level " + std::to_string(l));

  // Distance values per non-final level, strictly increasing within a level.
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    std::vector<Exponent> vals;
    for (const Approximant& a : levels[l].members) {
      Exponent v = val_in_window(theta - a.series, window, "difference theta - " + a.label);
      if (!vals.empty() && v.cmp(vals.back()) <= 0 && !levels[l].attained)
        rep.failures.push_back("level " + std::to_string(l) + " values fail to increase at " +
                               a.label);
      vals.push_back(std::move(v));
    }
    if (vals.empty()) rep.failures.push_back("level " + std::to_string(l) + " has no members");
    rep.level_values.push_back(std::move(vals));
    rep.ordinary.push_back(levels[l].attained);
  }

  // Every sampled value at level l lies below every sampled value at l+1.
  for (std::size_t l = 0; l + 1 < rep.level_values.size(); ++l)
    for (const Exponent& lo : rep.level_values[l])
      for (const Exponent& hi : rep.level_values[l + 1])
        if (lo.cmp(hi) >= 0)
          rep.failures.push_back("level " + std::to_string(l) +
                                 " value fails to sit below level " + std::to_string(l + 1));

  // Challenge battery: each b of degree d slots into the level bracket
  // m_l <= d < m_{l+1} and must not beat that level's sampled distances.
  for (const Approximant& b : challenge) {
    std::size_t slot = 0;
    for (std::size_t l = 0; l + 1 < levels.size(); ++l)
      if (levels[l].degree <= b.degree && b.degree < levels[l + 1].degree) slot = l;
    if (b.degree >= levels.back().degree) {
      rep.failures.push_back("challenge " + b.label + " degree is not below deg theta");
      continue;
    }
    Exponent v = val_in_window(theta - b.series, window, "difference theta - " + b.label);
    bool ok = v.cmp(rep.level_values[slot].back()) <= 0;
    rep.challenge_results.emplace_back(b.label, ok);
    if (!ok)
      rep.failures.push_back("challenge " + b.label + " beats the sampled level " +
                             std::to_string(slot) + " distances");
  }

  rep.ok = rep.failures.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Tame multiset predictor

std::vector<Exponent> tame_multiset_predict(int n, const std::vector<int>& degrees,
                                            const std::vector<Exponent>& deltas) {
  if (degrees.size() < 2 || degrees.front() != 1 || degrees.back() != n)
    throw std::invalid_argument("degree chain must run from 1 to n");
  if (deltas.size() + 1 != degrees.size())
    throw std::invalid_argument("one delta per augmentation step");
  for (std::size_t i = 1; i < degrees.size(); ++i)
    if (degrees[i] <= 0 || degrees[i] % degrees[i - 1] != 0 || degrees[i] == degrees[i - 1])
      throw std::invalid_argument("each degree must properly divide the next");
  std::vector<Exponent> out;
  for (std::size_t i = 0; i + 1 < degrees.size(); ++i) {
    int t = n / degrees[i] - n / degrees[i + 1];
    for (int k = 0; k < t; ++k) out.push_back(deltas[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomials and Hasse-Schmidt derivatives

SeriesPoly poly_make(SeriesCtxPtr ctx, std::vector<HahnSeries> coeffs) {
  for (const HahnSeries& c : coeffs)
    if (c.ctx() != ctx) throw ContextMismatchError("coefficient from a different series context");
  return SeriesPoly{std::move(ctx), std::move(coeffs)};
}

SeriesPoly poly_add(const SeriesPoly& a, const SeriesPoly& b) {
  if (a.ctx != b.ctx) throw ContextMismatchError("polynomials from different contexts");
  std::vector<HahnSeries> out;
  for (std::size_t i = 0; i < std::max(a.coeffs.size(), b.coeffs.size()); ++i) {
    if (i >= a.coeffs.size()) out.push_back(b.coeffs[i]);
    else if (i >= b.coeffs.size()) out.push_back(a.coeffs[i]);
    else out.push_back(a.coeffs[i] + b.coeffs[i]);
  }
  return SeriesPoly{a.ctx, std::move(out)};
}

SeriesPoly poly_sub(const SeriesPoly& a, const SeriesPoly& b) {
  SeriesPoly nb = b;
  for (HahnSeries& c : nb.coeffs) c = -c;
  return poly_add(a, nb);
}

SeriesPoly hasse_schmidt(const SeriesPoly& f, int s) {
  if (s < 0) throw std::invalid_argument("derivative order must be nonnegative");
  unsigned long p = f.ctx->field->p();
  std::vector<HahnSeries> out;
  for (std::size_t n = static_cast<std::size_t>(s); n < f.coeffs.size(); ++n) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, static_cast<unsigned long>(s));
    long r = mpz_class(b % p).get_si();
    out.push_back(f.coeffs[n].scale(FFElem::from_int(f.ctx->field, r)));
  }
  return SeriesPoly{f.ctx, std::move(out)};
}

HahnSeries poly_eval(const SeriesPoly& f, const HahnSeries& x) {
  HahnSeries acc = HahnSeries::zero(f.ctx);
  for (std::size_t i = f.coeffs.size(); i-- > 0;) acc = acc.mul(x) + f.coeffs[i];
  return acc;
}

}  // namespace hahnlab
