#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "hahnlab/basis.hpp"

namespace hahnlab {

// Refinement steps allowed before a comparison gives up.
inline constexpr int kDefaultRefineBudget = 256;

// Element of the exponent group: a rational coordinate vector over the basis
// symbols of a context.  Value semantics; coordinates are kept sorted by
// symbol index with zeros dropped, so identical() is plain structural
// equality.
//
// Order comparisons evaluate the real number the vector denotes.  Distinct
// vectors denote distinct reals (the declared independence of the basis), so
// interval refinement decides every comparison -- or throws
// RefinementBudgetError if the budget is too small.
class Exponent {
 public:
  using Coords = std::vector<std::pair<int, mpq_class>>;

  static Exponent zero(BasisPtr ctx);
  static Exponent rational(BasisPtr ctx, mpq_class q);
  static Exponent single(const BasisPtr& ctx, const std::string& symbol, mpq_class q);
  static Exponent make(BasisPtr ctx, Coords coords);

  const BasisPtr& ctx() const { return ctx_; }
  const Coords& coords() const { return coords_; }
  bool is_zero() const { return coords_.empty(); }
  mpq_class coord(int symbol_index) const;

  Exponent operator+(const Exponent& o) const;
  Exponent operator-(const Exponent& o) const;
  Exponent operator-() const;
  Exponent scaled(const mpq_class& q) const;

  bool identical(const Exponent& o) const;

  // Sign of the denoted real: -1, 0 (only for the zero vector), +1.
  int sign(int budget = kDefaultRefineBudget) const;
  // Three-way order: -1, 0, +1.
  int cmp(const Exponent& o, int budget = kDefaultRefineBudget) const;
  bool lt(const Exponent& o, int budget = kDefaultRefineBudget) const { return cmp(o, budget) < 0; }
  bool leq(const Exponent& o, int budget = kDefaultRefineBudget) const { return cmp(o, budget) <= 0; }

  // Enclosure of the denoted real at a refinement level (for diagnostics).
  QInterval enclosure(int level) const;

  // Text form, e.g. "0", "-1/9", "(-1/9)*pi + (2/3)".  Unit coordinate is
  // printed bare and last; other coordinates as "(q)*name" in symbol order.
  std::string str() const;

 private:
  Exponent(BasisPtr ctx, Coords coords) : ctx_(std::move(ctx)), coords_(std::move(coords)) {}

  BasisPtr ctx_;
  Coords coords_;  // sorted by symbol index, all values nonzero
};

// Throws ContextMismatchError unless both exponents share one context.
void require_same_ctx(const Exponent& a, const Exponent& b);

}  // namespace hahnlab
