#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hahnlab/cuts.hpp"
#include "hahnlab/extensions.hpp"

namespace hahnlab {

// ---------------------------------------------------------------------------
// Symbolic layer: polynomials in named field generators with series
// coefficients.  Automorphisms act on these expressions first; evaluation to
// a concrete series happens on demand through an environment binding each
// symbol to its series solution.

// symbol -> positive power; the empty map is the constant monomial.
using SymMonomial = std::map<std::string, int>;

struct SymTerm {
  SymMonomial mono;
  HahnSeries coef;
};

// Terms are kept sorted by monomial with at most one term per monomial.
// Coefficients with known finite empty support are dropped; lazy
// coefficients are kept as-is, since deciding that an infinite stream
// vanishes is not a finite computation.
struct SymExpr {
  SeriesCtxPtr ctx;
  std::vector<SymTerm> terms;
};

SymExpr sym_zero(SeriesCtxPtr ctx);
SymExpr sym_const(HahnSeries c);
SymExpr sym_symbol(SeriesCtxPtr ctx, const std::string& name);
SymExpr sym_add(const SymExpr& a, const SymExpr& b);
SymExpr sym_sub(const SymExpr& a, const SymExpr& b);
SymExpr sym_neg(const SymExpr& a);
SymExpr sym_mul(const SymExpr& a, const SymExpr& b);

// Substitutes the environment series for the symbols and folds terms.
// Powers multiply densely, so environments with infinite series support
// degree <= 1 terms only (deeper products need a window the expression
// layer does not carry).
HahnSeries sym_eval(const SymExpr& e, const std::map<std::string, HahnSeries>& env);

// Deterministic rendering: "theta - a" style is out of reach, but
// "(c)*theta*eta^2 + 1" is stable across runs and usable as a label.
std::string sym_str(const SymExpr& e);

// ---------------------------------------------------------------------------
// Group models

// Exponent vector over the model's generators; all entries reduced mod p.
struct GroupElement {
  std::vector<int> exps;

  bool operator==(const GroupElement& o) const { return exps == o.exps; }
  bool operator<(const GroupElement& o) const { return exps < o.exps; }
};

class GaloisGroupModel;
using GroupModelPtr = std::shared_ptr<const GaloisGroupModel>;

// A finite group together with its affine action on the field generators:
// every generator g moves a symbol x to x + shift(g, x), with symbols
// missing from the shift table fixed.  Elementary abelian models add
// exponent vectors; the Heisenberg model of order p^3 keeps the normal form
// iota^a tau^b sigma^c with iota central and sigma tau sigma^-1 = iota^-2 tau.
class GaloisGroupModel {
 public:
  enum class Family { elementary_abelian, heisenberg };

  static GroupModelPtr elementary_abelian(
      int n, int p, std::vector<std::string> generator_names,
      std::set<std::string> field_symbols = {},
      std::map<std::string, std::map<std::string, SymExpr>> shifts = {});
  // generator_names must list the normal-form order {iota, tau, sigma}.
  static GroupModelPtr heisenberg(
      int p, std::vector<std::string> generator_names,
      std::set<std::string> field_symbols = {},
      std::map<std::string, std::map<std::string, SymExpr>> shifts = {});

  Family family() const { return family_; }
  int p() const { return p_; }
  int rank() const { return static_cast<int>(generator_names_.size()); }
  const std::vector<std::string>& generator_names() const { return generator_names_; }
  const std::set<std::string>& field_symbols() const { return field_symbols_; }
  const std::map<std::string, SymExpr>* shifts_of(const std::string& generator) const;

 private:
  GaloisGroupModel() = default;
  // Validates the shift table against the generator and symbol sets.
  static GroupModelPtr finish(std::shared_ptr<GaloisGroupModel> model);

  Family family_ = Family::elementary_abelian;
  int p_ = 0;
  std::vector<std::string> generator_names_;
  std::set<std::string> field_symbols_;
  std::map<std::string, std::map<std::string, SymExpr>> shifts_;
};

GroupElement group_identity(const GaloisGroupModel& model);
bool group_is_identity(const GroupElement& g);
GroupElement group_mul(const GaloisGroupModel& model, const GroupElement& g,
                       const GroupElement& h);
GroupElement group_inverse(const GaloisGroupModel& model, const GroupElement& g);
// All p^rank elements for elementary abelian, all p^3 normal forms for
// Heisenberg, identity first, lexicographic in the exponent vector.
std::vector<GroupElement> group_elements(const GaloisGroupModel& model);
// "id", "tau*sigma^2", "iota^2".
std::string element_str(const GaloisGroupModel& model, const GroupElement& g);

struct Subgroup {
  std::vector<GroupElement> generators;
  std::vector<GroupElement> elements;  // sorted, closed under mul and inverse
};

// Every subgroup, the trivial one included, by closing generator sets one
// added element at a time until the lattice stabilizes.  Sorted by order,
// then by element list.  Guarded to groups of order <= 10^4.
std::vector<Subgroup> subgroup_enumerate(const GaloisGroupModel& model);

// Applies g symbolically: substitute x -> x + shift per the table for each
// generator factor (rightmost normal-form factor first), expand, collect.
// Throws on symbols outside the model's field-symbol set.
SymExpr apply_automorphism(const GaloisGroupModel& model, const GroupElement& g,
                           const SymExpr& expr);

// Values v(g b - b) - v(b) for each test expression b.  The difference
// g b - b is assembled telescopically at the symbolic level, so unmoved
// parts of b never enter a series-level cancellation.  The identity (and
// any g fixing b) makes the numerator vanish and throws.
std::vector<Exponent> i_sigma_witnesses(const GaloisGroupModel& model, const GroupElement& g,
                                        const std::vector<SymExpr>& tests,
                                        const std::map<std::string, HahnSeries>& env,
                                        const std::optional<Exponent>& window = std::nullopt);

struct RamEvidence {
  std::string element;  // group element label
  std::string test;     // test expression label
  Exponent value;       // v((g b - b) / b)
};

// A ramification-ideal segment together with the sampled witnesses that
// realize membership.  equality marks the segments known to equal the ideal
// rather than merely bound it from inside.
struct RamSegment {
  FinalSegment segment;
  std::vector<RamEvidence> evidence;
  bool equality = false;
};

// The segment min(s_values) - D for the distance cut D read off d1, with
// every supplied evidence value checked for membership (witness soundness);
// a violation throws.  equality_hypotheses marks the small-cyclic case
// (order <= p, height condition, immediate) where the inclusion is known to
// be an equality.
RamSegment i_h_formula(const BasisPtr& basis, const std::vector<Exponent>& s_values,
                       const DistanceWitnesses& d1, const WitnessCutOptions& d1_opts,
                       std::vector<RamEvidence> evidence, bool equality_hypotheses);

struct HCReport {
  bool ok = false;      // all sampled values >= 0
  bool strict = false;  // all sampled values > 0
  std::vector<std::pair<std::string, Exponent>> values;
};

// Height condition battery: min_s - v(theta - a) over the sampled a family,
// where min_s = min over the subgroup of v(g theta - theta).
HCReport hc_check(const Exponent& min_s, const HahnSeries& theta,
                  const std::vector<Approximant>& samples,
                  const std::optional<Exponent>& window = std::nullopt);

struct RamComparison {
  std::vector<FinalSegment> ram;  // deduped segments
  int depth = 0;
  int s_theta_count = 0;
  bool depth_less_than_ram = false;
};

// Dedupes the per-subgroup segments into the ramification set and emits the
// (count, depth, distance-set size) comparison.  A missing segment for any
// subgroup throws.
RamComparison ram_set_and_compare(const std::vector<std::optional<RamSegment>>& per_subgroup,
                                  int depth, int s_theta_count);

}  // namespace hahnlab
