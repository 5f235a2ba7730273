#include "hahnlab/basis.hpp"

#include <set>
#include <stdexcept>

namespace hahnlab {

BasisSymbol BasisSymbol::exact(std::string name, mpq_class value) {
  BasisSymbol s;
  s.name = std::move(name);
  s.kind = Kind::exact;
  s.exact_value = std::move(value);
  return s;
}

BasisSymbol BasisSymbol::pi() {
  BasisSymbol s;
  s.name = "pi";
  s.kind = Kind::pi;
  return s;
}

BasisSymbol BasisSymbol::reciprocal_r(unsigned prime, unsigned index) {
  if (index < 2) throw std::invalid_argument("reciprocal_r: index starts at 2");
  BasisSymbol s;
  s.name = "r" + std::to_string(index);
  s.kind = Kind::reciprocal_pi_shift;
  s.shift = mpq_class(prime + index - 1);
  return s;
}

BasisContext::BasisContext(std::vector<BasisSymbol> symbols) : symbols_(std::move(symbols)) {
  cache_.resize(symbols_.size());
}

std::shared_ptr<const BasisContext> BasisContext::make(std::vector<BasisSymbol> symbols) {
  if (symbols.empty() || symbols[0].kind != BasisSymbol::Kind::exact ||
      symbols[0].exact_value != 1) {
    throw std::invalid_argument("basis: symbol 0 must be the exact unit 1");
  }
  std::set<std::string> names;
  for (const auto& s : symbols) {
    if (!names.insert(s.name).second)
      throw std::invalid_argument("basis: duplicate symbol name " + s.name);
    if (s.kind == BasisSymbol::Kind::exact && s.exact_value <= 0)
      throw std::invalid_argument("basis: symbol values must be positive");
  }
  return std::shared_ptr<const BasisContext>(new BasisContext(std::move(symbols)));
}

int BasisContext::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (symbols_[i].name == name) return i;
  return -1;
}

// Alternating partial sums of atan(1/x) = sum (-1)^k / ((2k+1) x^{2k+1});
// consecutive sums bracket the limit, so [s_n, s_{n+1}] sorted is a certified
// enclosure.
static QInterval atan_inv_enclosure(unsigned long x, int terms) {
  mpq_class sum = 0;
  mpz_class xpow = x;  // x^{2k+1}
  mpq_class last = 0;
  for (int k = 0; k <= terms; ++k) {
    mpq_class term(1, 1);
    term /= mpq_class((2 * k + 1) * xpow);
    if (k % 2) sum -= term;
    else sum += term;
    if (k == terms - 1) last = sum;
    xpow *= x * x;
  }
  if (last <= sum) return QInterval(last, sum);
  return QInterval(sum, last);
}

QInterval BasisContext::machin_pi(int level) {
  int terms = level + 2;
  QInterval a = atan_inv_enclosure(5, terms);
  QInterval b = atan_inv_enclosure(239, terms);
  return a.scaled(16) - b.scaled(4);
}

QInterval BasisContext::raw_enclosure(int i, int level) const {
  const BasisSymbol& s = symbols_[i];
  switch (s.kind) {
    case BasisSymbol::Kind::exact:
      return QInterval::point(s.exact_value);
    case BasisSymbol::Kind::pi:
      return machin_pi(level);
    case BasisSymbol::Kind::reciprocal_pi_shift: {
      // value = 1/(shift + 1/pi); monotone transforms of the pi enclosure.
      QInterval pi_enc = machin_pi(level);
      QInterval inner = QInterval::point(s.shift) + pi_enc.reciprocal();
      return inner.reciprocal();
    }
  }
  throw std::logic_error("unreachable");
}

QInterval BasisContext::enclosure(int i, int level) const {
  if (i < 0 || i >= size()) throw std::out_of_range("basis symbol index");
  std::lock_guard<std::mutex> lock(mutex_);
  auto& levels = cache_[i];
  while (static_cast<int>(levels.size()) <= level) {
    int next = static_cast<int>(levels.size());
    QInterval raw = round_outward(raw_enclosure(i, next), 64 + 32 * static_cast<unsigned>(next));
    if (!levels.empty()) raw = raw.intersect(levels.back());
    levels.push_back(raw);
  }
  return levels[level];
}

}  // namespace hahnlab
