#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hahnlab/cuts.hpp"
#include "hahnlab/lattice.hpp"
#include "hahnlab/series.hpp"

namespace hahnlab {

// A root of x^p - x = rhs together with the equation it solves.  The
// solution is the lazy stream sum of the iterated p-th roots of rhs, which
// solves the equation exactly in characteristic p.
struct ASElement {
  HahnSeries rhs;
  HahnSeries solution;
  std::string label;
};

// Requires v(rhs) < 0: then the iterated roots have strictly increasing
// valuations and the stream converges coordinatewise.
ASElement as_solve(const HahnSeries& rhs, std::string label = "");

// sum over m >= 1 of weight(m) * rhs^(1/p^m).  Requires v(rhs) < 0 so the
// summand valuations strictly increase.  Zero weights are skipped; a run of
// 64 consecutive zero weights ends the sum, so finitely supported weight
// functions produce finite sums.
HahnSeries as_weighted_sum(const HahnSeries& rhs, const std::function<FFElem(int)>& weight);

// solution^p - solution reproduces rhs below the window.
bool as_element_check(const ASElement& e, const Exponent& below);

// A linear combination sum coefficient_i * root_i of Artin-Schreier roots.
// The disjoint flag declares that the roots generate linearly disjoint
// degree-p extensions, which is what makes the conjugate count p^n; it is a
// scenario-level hypothesis, not something the kernel derives.
struct ComboPart {
  HahnSeries coefficient;  // finite support
  ASElement element;
};

struct GeneratorCombo {
  std::vector<ComboPart> parts;
  bool disjoint = false;
};

// The combined element as a series.
HahnSeries combo_series(const GeneratorCombo& g);

// All p^n conjugates theta + sum e_i * coefficient_i, e in F_p^n.
// Requires the disjoint declaration and finite coefficients.
std::vector<HahnSeries> conjugate_set(const GeneratorCombo& g);

// Values v(theta' - theta) over the p^n - 1 nontrivial conjugates, as a
// deduplicated sorted set and as the full sorted multiset.
struct SThetaResult {
  std::vector<Exponent> set;
  std::vector<Exponent> multiset;
};
SThetaResult s_theta(const GeneratorCombo& g);

// max of the s_theta set.
Exponent krasner_omega(const GeneratorCombo& g);

// Brute force over tuples a in F_p^n minus zero: every combination
// sum a_i * coeffs_i has valuation exactly 0.
bool ge_witness_check(const FieldPtr& field, const std::vector<HahnSeries>& coeffs);

// An approximant to a generator, with its declared degree over the ground
// field.  Degrees are scenario inputs; the kernel never computes them.
struct Approximant {
  HahnSeries series;
  int degree = 1;
  std::string label;
};

struct DistanceWitnesses {
  std::vector<Approximant> approximants;
  std::vector<Exponent> values;
  bool attained = false;
};

struct DistanceEvalResult {
  DistanceWitnesses witnesses;
  Cut cut;
  // Parallel to values when a lattice family is supplied: true means the
  // value lies outside the corresponding lattice (the non-attainment
  // evidence pattern).
  std::vector<bool> outside_lattice;
};

// Values v(theta - a) along an approximant family, the induced cut of the
// distance set, and optional per-level lattice non-membership evidence.
// A window, when given, bounds each valuation search; a difference with no
// support below the window is reported as a window error.
DistanceEvalResult distance_witnesses_eval(const HahnSeries& theta,
                                           std::vector<Approximant> approximants,
                                           const WitnessCutOptions& cut_opts,
                                           const std::optional<Exponent>& window = std::nullopt,
                                           const std::vector<ValueLattice>* lattices = nullptr);

// First valuation of s inside the window (of the whole stream when no window
// is given); throws std::invalid_argument when s has no support there.
Exponent val_in_window(const HahnSeries& s, const std::optional<Exponent>& window,
                       const std::string& what);

// The cut read off a finite sample of distance values.  Attained families
// end at their maximum; unattained families are an increasing stream, so the
// sampling depth is capped at the family size rather than letting the
// generator run dry (which would read as a finite set).
Cut distance_cut(const BasisPtr& basis, const DistanceWitnesses& w,
                 const WitnessCutOptions& opts);

// One level of an approximant chain: a sampled family of fixed declared
// degree.  The attained flag declares whether the distance set at this
// degree has a maximal element (ordinary level) or not (limit level).
struct OkutsuLevel {
  std::vector<Approximant> members;
  int degree = 1;
  bool attained = false;
};

struct OkutsuCandidate {
  std::vector<OkutsuLevel> levels;  // last level is {theta} at full degree
};

struct OkutsuReport {
  bool ok = false;
  int depth = 0;  // number of proper augmentation steps = levels - 1
  std::vector<std::string> failures;
  std::vector<std::vector<Exponent>> level_values;  // v(theta - a) per non-final level
  std::vector<bool> ordinary;                       // per non-final level
  std::vector<std::pair<std::string, bool>> challenge_results;
};

// Verifies the necessary conditions on a candidate chain: the degree chain
// 1 = m_0 < ... < m_r = deg theta, strictly increasing distance values
// within each level, every level's values below the next level's, and the
// dominance v(theta - b) <= max sampled v(theta - a) for each challenge b
// slotted into its degree bracket.  The universal statement behind the last
// condition is a theorem, not a finite computation; this battery checks the
// supplied witnesses only.
OkutsuReport okutsu_verify(const OkutsuCandidate& cand, const HahnSeries& theta,
                           const std::vector<Approximant>& challenge,
                           const std::optional<Exponent>& window = std::nullopt);

// Multiset {delta_i repeated n/m_i - n/m_{i+1} times} for a divisor chain
// m_0 = 1 | m_1 | ... | m_r = n; its cardinality is always n - 1.
std::vector<Exponent> tame_multiset_predict(int n, const std::vector<int>& degrees,
                                            const std::vector<Exponent>& deltas);

// Polynomial in one variable with series coefficients, coeffs[i] * x^i.
struct SeriesPoly {
  SeriesCtxPtr ctx;
  std::vector<HahnSeries> coeffs;
};

SeriesPoly poly_make(SeriesCtxPtr ctx, std::vector<HahnSeries> coeffs);
SeriesPoly poly_add(const SeriesPoly& a, const SeriesPoly& b);
SeriesPoly poly_sub(const SeriesPoly& a, const SeriesPoly& b);

// Coefficient of y^s in f(x + y): the s-th divided-power derivative, exact
// in characteristic p via binomials reduced mod p.
SeriesPoly hasse_schmidt(const SeriesPoly& f, int s);

// Horner evaluation; products are dense, so x must have finite support.
HahnSeries poly_eval(const SeriesPoly& f, const HahnSeries& x);

}  // namespace hahnlab
