#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hahnlab/interval.hpp"

namespace hahnlab {

// One coordinate axis of the exponent group: a positive real number together
// with a recipe for producing arbitrarily tight rational enclosures of it.
//
// The symbols of a context are declared rationally independent; comparisons
// rely on that axiom to terminate.  The stock families:
//   exact(q)             -- the rational number q itself
//   pi()                 -- the circle constant
//   reciprocal_r(p, j)   -- 1/r_j where r_j = p + (j-1) + 1/pi.
// A symbol named "rj" therefore carries the *reciprocal* 1/r_j, so rational
// coordinate vectors can express exponents like p/r_j directly.
struct BasisSymbol {
  enum class Kind { exact, pi, reciprocal_pi_shift };

  std::string name;
  Kind kind = Kind::exact;
  mpq_class exact_value = 0;  // kind == exact
  mpq_class shift = 0;        // kind == reciprocal_pi_shift: value = 1/(shift + 1/pi)

  static BasisSymbol exact(std::string name, mpq_class value);
  static BasisSymbol pi();
  static BasisSymbol reciprocal_r(unsigned prime, unsigned index);
};

// Immutable ordered list of basis symbols.  Symbol 0 is always the exact
// rational unit 1.  Enclosure refinement is cached and thread-safe.
class BasisContext {
 public:
  // Throws std::invalid_argument if symbol 0 is not the unit, a name repeats,
  // or a symbol value is not positive.
  static std::shared_ptr<const BasisContext> make(std::vector<BasisSymbol> symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  const BasisSymbol& symbol(int i) const { return symbols_.at(i); }
  // -1 when absent.
  int index_of(const std::string& name) const;

  // Enclosure of symbol i at the given refinement level.  Levels nest:
  // enclosure(i, k+1) is contained in enclosure(i, k).
  QInterval enclosure(int i, int level) const;

  // Certified enclosure of pi used by the reciprocal_r family; exposed for
  // tests.  Width shrinks geometrically with the level.
  static QInterval machin_pi(int level);

 private:
  explicit BasisContext(std::vector<BasisSymbol> symbols);
  QInterval raw_enclosure(int i, int level) const;

  std::vector<BasisSymbol> symbols_;
  mutable std::mutex mutex_;
  mutable std::vector<std::vector<QInterval>> cache_;  // per symbol, per level
};

using BasisPtr = std::shared_ptr<const BasisContext>;

}  // namespace hahnlab
