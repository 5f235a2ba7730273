#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "hahnlab/exponent.hpp"

namespace hahnlab {

// Finitely generated subgroup of the exponent group, given by a (possibly
// dependent) list of generators.  Membership and index questions reduce to
// integer linear algebra on the coordinate vectors; no real arithmetic is
// involved, so answers are exact.
class ValueLattice {
 public:
  ValueLattice(BasisPtr ctx, std::vector<Exponent> generators);

  const BasisPtr& ctx() const { return ctx_; }
  const std::vector<Exponent>& generators() const { return generators_; }

  // Whether x is an integer combination of the generators.
  bool contains(const Exponent& x) const;

  // Group index [*this : sub].  Throws std::invalid_argument when sub is not
  // contained in *this; returns nullopt when the index is infinite (rank
  // drop).
  std::optional<mpz_class> index_over(const ValueLattice& sub) const;

 private:
  BasisPtr ctx_;
  std::vector<Exponent> generators_;
};

}  // namespace hahnlab
