#pragma once

#include <gmpxx.h>

#include <cassert>
#include <string>

namespace hahnlab {

// Closed interval with exact rational endpoints, used as a certified
// enclosure of a real number.  All operations are outward-safe: the result
// encloses every possible value of the operands.
struct QInterval {
  mpq_class lo;
  mpq_class hi;

  QInterval() : lo(0), hi(0) {}
  QInterval(mpq_class l, mpq_class h) : lo(std::move(l)), hi(std::move(h)) { assert(lo <= hi); }

  static QInterval point(const mpq_class& v) { return QInterval(v, v); }

  mpq_class width() const { return hi - lo; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  // Sign of every value in the interval: -1, +1, or 0 when undecided.
  int sign() const {
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return 0;
  }

  QInterval operator+(const QInterval& o) const { return QInterval(lo + o.lo, hi + o.hi); }
  QInterval operator-(const QInterval& o) const { return QInterval(lo - o.hi, hi - o.lo); }

  QInterval scaled(const mpq_class& q) const {
    if (q >= 0) return QInterval(lo * q, hi * q);
    return QInterval(hi * q, lo * q);
  }

  // 1/x for an interval strictly bounded away from zero.
  QInterval reciprocal() const {
    assert(sign() != 0);
    return QInterval(1 / hi, 1 / lo);
  }

  // Intersection; caller guarantees the intervals overlap (nested refinements).
  QInterval intersect(const QInterval& o) const {
    QInterval r(lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi);
    return r;
  }

  std::string str() const { return "[" + lo.get_str() + ", " + hi.get_str() + "]"; }
};

// Outward rounding to denominator 2^bits: keeps endpoint sizes under control
// when refinements are iterated.
inline QInterval round_outward(const QInterval& x, unsigned bits) {
  mpz_class den = 1;
  den <<= bits;
  mpz_class lo_num, hi_num;
  // floor(lo*den) and ceil(hi*den)
  mpz_fdiv_q(lo_num.get_mpz_t(), mpz_class(x.lo.get_num() * den).get_mpz_t(),
             x.lo.get_den().get_mpz_t());
  mpz_cdiv_q(hi_num.get_mpz_t(), mpz_class(x.hi.get_num() * den).get_mpz_t(),
             x.hi.get_den().get_mpz_t());
  mpq_class lo(lo_num, den), hi(hi_num, den);
  lo.canonicalize();
  hi.canonicalize();
  return QInterval(lo, hi);
}

}  // namespace hahnlab
