#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hahnlab/exponent.hpp"

namespace hahnlab {

// A cut of the exponent group: a partition (L, R) with L < R.  Principal
// cuts sit immediately below or above a group element; the improper cuts
// have an empty side.  Witness cuts are known only through a sampled
// strictly increasing stream approaching the partition point from the left.
class Cut {
 public:
  enum class Kind { minus_infinity, principal, witness_limit, plus_infinity_minus };
  enum class Side { minus, plus };

  static Cut minus_infinity(BasisPtr basis);
  static Cut plus_infinity_minus(BasisPtr basis);
  static Cut principal(Exponent gamma, Side side);
  // The cut just above the set sampled from an increasing stream.  If the
  // stream terminates, its maximum is attained and the cut is principal.
  static Cut just_above_set(BasisPtr basis, std::vector<Exponent> sampled, bool exhausted);
  // The cut just below an increasing set is principal at its first element.
  static Cut just_below_set(BasisPtr basis, std::vector<Exponent> sampled);

  Kind kind() const { return kind_; }
  bool is_principal() const { return kind_ == Kind::principal; }
  const Exponent& gamma() const;        // principal only
  Side side() const;                    // principal only
  const std::vector<Exponent>& witnesses() const;  // witness_limit only
  const BasisPtr& basis() const { return basis_; }

  // "-1^-", "0^+", "((-1/9)*pi)^-", "-inf", "inf^-", "limsup{...}".
  std::string str() const;

 private:
  Cut(BasisPtr basis, Kind kind) : basis_(std::move(basis)), kind_(kind) {}

  BasisPtr basis_;
  Kind kind_;
  std::optional<Exponent> gamma_;
  Side side_ = Side::minus;
  std::vector<Exponent> witnesses_;
};

enum class CutOrder { lt, eq, gt, inconclusive };

struct CutCmpResult {
  CutOrder order = CutOrder::inconclusive;
  int depth = 0;  // sampling depth at which an inconclusive comparison gave up
};

// Exact for principal and improper cuts.  A witness cut is decided against a
// principal cut when a sampled witness crosses the point; otherwise, and for
// witness against witness, the comparison reports inconclusive instead of
// guessing from a finite sample.
CutCmpResult cut_cmp(const Cut& a, const Cut& b);

// Options for building the cut of a witness family.
struct WitnessCutOptions {
  std::optional<Exponent> limit_hint;
  bool attained = false;   // the stream is finite and its last value is a maximum
  int sample_depth = 32;   // witnesses drawn from the stream
  int probe_depth = 6;     // probes limit - 1/p^k for k = 1..probe_depth
  unsigned prime = 0;      // required when limit_hint is set
};

// Cut just above the set of values of a strictly increasing stream
// (nullopt ends the stream).  With a limit hint g the result is g^- exactly
// when every sampled value stays below g and the family climbs past each
// probe g - 1/p^k; any miss falls back to the sampled witness form.
Cut cut_from_witnesses(BasisPtr basis, const std::function<std::optional<Exponent>(int)>& vals,
                       const WitnessCutOptions& opts);

class InitialSegment;

// An upward-closed subset of the exponent group: the value set of a
// fractional ideal.  GeneratedBy is the union of the closed segments above
// the sampled values of a strictly decreasing witness stream.
class FinalSegment {
 public:
  enum class Kind { above_open, above_closed, generated_by };

  static FinalSegment above_open(Exponent gamma);
  static FinalSegment above_closed(Exponent gamma);
  static FinalSegment generated_by(std::vector<Exponent> decreasing);

  Kind kind() const { return kind_; }
  const Exponent& gamma() const;                   // principal kinds
  const std::vector<Exponent>& witnesses() const;  // generated_by only

  bool contains(const Exponent& val) const;
  // Minkowski translate S + {delta}.
  FinalSegment shifted(const Exponent& delta) const;
  InitialSegment negated() const;

  bool same(const FinalSegment& o) const;
  // "{v > 0}", "{v >= -1}", "{v >= one of {...}}".
  std::string str() const;

 private:
  FinalSegment(Kind kind, std::optional<Exponent> gamma, std::vector<Exponent> w)
      : kind_(kind), gamma_(std::move(gamma)), witnesses_(std::move(w)) {}

  Kind kind_;
  std::optional<Exponent> gamma_;
  std::vector<Exponent> witnesses_;
};

// Downward-closed mirror of FinalSegment; arises as the negation of a final
// segment and as the left class of a cut.
class InitialSegment {
 public:
  enum class Kind { below_open, below_closed, generated_by };

  static InitialSegment below_open(Exponent gamma);
  static InitialSegment below_closed(Exponent gamma);
  static InitialSegment generated_by(std::vector<Exponent> increasing);

  Kind kind() const { return kind_; }
  const Exponent& gamma() const;
  const std::vector<Exponent>& witnesses() const;

  bool contains(const Exponent& val) const;
  FinalSegment negated() const;
  std::string str() const;

 private:
  InitialSegment(Kind kind, std::optional<Exponent> gamma, std::vector<Exponent> w)
      : kind_(kind), gamma_(std::move(gamma)), witnesses_(std::move(w)) {}

  Kind kind_;
  std::optional<Exponent> gamma_;
  std::vector<Exponent> witnesses_;
};

// Minkowski sum.  Openness wins at the endpoint: open + closed = open.  The
// sum of two witness-generated segments is unsupported (sampling depths do
// not compose) and throws std::invalid_argument.
FinalSegment segment_sum(const FinalSegment& a, const FinalSegment& b);

// Union of two segments; for principal operands this is the wider one.
// Witness-generated operands are unsupported and throw.
FinalSegment segment_union(const FinalSegment& a, const FinalSegment& b);

// The set gamma - D for the left class D of the cut d: subtracting a
// downward-closed set from a point reflects it into a final segment.
//   d = delta^-  ->  { v > gamma - delta }
//   d = delta^+  ->  { v >= gamma - delta }
//   d = limsup of witnesses w  ->  generated by { gamma - w }
// Improper cuts have an empty or full left class and are rejected.
FinalSegment point_minus_initial(const Exponent& gamma, const Cut& d);

// Membership of a valuation in the ideal named by a segment.
bool ideal_contains(const FinalSegment& s, const Exponent& val);

}  // namespace hahnlab
