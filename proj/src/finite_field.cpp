#include "hahnlab/finite_field.hpp"

#include <cassert>
#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {
namespace {

using Poly = std::vector<unsigned>;  // coefficients mod p, low first, no trailing zeros

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f by monic g, both over F_p.
Poly poly_mod(Poly f, const Poly& g, unsigned p) {
  trim(f);
  while (f.size() >= g.size()) {
    unsigned lead = f.back();
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      unsigned sub = (lead * g[i]) % p;
      unsigned& c = f[shift + i];
      c = (c + p - sub) % p;
    }
    trim(f);
  }
  return f;
}

bool is_irreducible(const Poly& f, unsigned p) {
  unsigned deg = static_cast<unsigned>(f.size()) - 1;
  if (deg == 0) return false;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    unsigned long count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned long n = 0; n < count; ++n) {
      Poly g(d + 1, 0);
      unsigned long v = n;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = v % p;
        v /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<unsigned> FieldSpec::default_modulus(unsigned p, unsigned m) {
  if (m == 1) return {0, 1};  // x itself; the quotient is F_p with u = 0
  unsigned long count = 1;
  for (unsigned i = 0; i < m; ++i) count *= p;
  for (unsigned long n = 0; n < count; ++n) {
    Poly f(m + 1, 0);
    unsigned long v = n;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = v % p;
      v /= p;
    }
    f[m] = 1;
    if (is_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");  // impossible
}

FieldSpec::FieldSpec(unsigned p, unsigned m, std::vector<unsigned> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
  order_ = 1;
  for (unsigned i = 0; i < m; ++i) order_ *= p;
}

static bool probably_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FieldPtr FieldSpec::make(unsigned p, unsigned m) {
  if (!probably_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (m == 0) throw std::invalid_argument("field degree must be positive");
  return make(p, m, default_modulus(p, m));
}

FieldPtr FieldSpec::make(unsigned p, unsigned m, std::vector<unsigned> modulus) {
  if (!probably_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (m == 0) throw std::invalid_argument("field degree must be positive");
  if (m > 12) throw std::invalid_argument("field degree beyond desk scale");
  if (modulus.size() != m + 1 || modulus.back() != 1)
    throw std::invalid_argument("modulus must be monic of degree m");
  for (unsigned c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficients must be reduced mod p");
  if (m > 1 && !is_irreducible(modulus, p))
    throw std::invalid_argument("modulus is reducible");
  return FieldPtr(new FieldSpec(p, m, std::move(modulus)));
}

void require_same_field(const FFElem& a, const FFElem& b) {
  if (a.field() != b.field()) throw ContextMismatchError("elements of different fields");
}

FFElem FFElem::zero(FieldPtr field) {
  std::vector<unsigned> c(field->m(), 0);
  return FFElem(std::move(field), std::move(c));
}

FFElem FFElem::one(FieldPtr field) { return from_int(std::move(field), 1); }

FFElem FFElem::from_int(FieldPtr field, long v) {
  unsigned p = field->p();
  std::vector<unsigned> c(field->m(), 0);
  long r = v % static_cast<long>(p);
  if (r < 0) r += p;
  c[0] = static_cast<unsigned>(r);
  return FFElem(std::move(field), std::move(c));
}

FFElem FFElem::u(FieldPtr field) {
  if (field->m() < 2) throw std::invalid_argument("u requires extension degree >= 2");
  std::vector<unsigned> c(field->m(), 0);
  c[1] = 1;
  return FFElem(std::move(field), std::move(c));
}

FFElem FFElem::from_coeffs(FieldPtr field, const std::vector<long>& coeffs) {
  if (coeffs.size() > field->m())
    throw std::invalid_argument("coefficient vector longer than field degree");
  unsigned p = field->p();
  std::vector<unsigned> c(field->m(), 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    long r = coeffs[i] % static_cast<long>(p);
    if (r < 0) r += p;
    c[i] = static_cast<unsigned>(r);
  }
  return FFElem(std::move(field), std::move(c));
}

FFElem FFElem::from_index(FieldPtr field, unsigned long n) {
  if (n >= field->order()) throw std::out_of_range("field element index");
  unsigned p = field->p();
  std::vector<unsigned> c(field->m(), 0);
  for (unsigned i = 0; i < field->m(); ++i) {
    c[i] = static_cast<unsigned>(n % p);
    n /= p;
  }
  return FFElem(std::move(field), std::move(c));
}

unsigned long FFElem::index() const {
  unsigned long n = 0;
  for (std::size_t i = c_.size(); i-- > 0;) n = n * field_->p() + c_[i];
  return n;
}

bool FFElem::is_zero() const {
  for (unsigned v : c_)
    if (v) return false;
  return true;
}

bool FFElem::operator==(const FFElem& o) const {
  require_same_field(*this, o);
  return c_ == o.c_;
}

FFElem FFElem::operator+(const FFElem& o) const {
  require_same_field(*this, o);
  std::vector<unsigned> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = (c_[i] + o.c_[i]) % field_->p();
  return FFElem(field_, std::move(c));
}

FFElem FFElem::operator-() const {
  std::vector<unsigned> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = (field_->p() - c_[i]) % field_->p();
  return FFElem(field_, std::move(c));
}

FFElem FFElem::operator-(const FFElem& o) const { return *this + (-o); }

FFElem FFElem::operator*(const FFElem& o) const {
  require_same_field(*this, o);
  unsigned p = field_->p();
  unsigned m = field_->m();
  std::vector<unsigned> prod(2 * m - 1, 0);
  for (unsigned i = 0; i < m; ++i) {
    if (!c_[i]) continue;
    for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + c_[i] * o.c_[j]) % p;
  }
  std::vector<unsigned> rem = poly_mod(std::move(prod), field_->modulus(), p);
  rem.resize(m, 0);
  return FFElem(field_, std::move(rem));
}

FFElem FFElem::pow(unsigned long e) const {
  FFElem acc = one(field_);
  FFElem base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

FFElem FFElem::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero field element");
  return pow(field_->order() - 2);
}

FFElem FFElem::operator/(const FFElem& o) const { return *this * o.inverse(); }

FFElem FFElem::int_scale(long k) const { return *this * from_int(field_, k); }

FFElem FFElem::frobenius() const { return pow(field_->p()); }

FFElem FFElem::frobenius_inverse() const {
  // x -> x^{p^{m-1}} inverts x -> x^p because x^{p^m} = x for every element.
  unsigned long e = 1;
  for (unsigned i = 0; i + 1 < field_->m(); ++i) e *= field_->p();
  return pow(e);
}

std::string FFElem::str() const {
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (!c_[i]) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c_[i]);
    } else {
      if (c_[i] != 1) out += std::to_string(c_[i]) + "*";
      out += (i == 1) ? "u" : "u^" + std::to_string(i);
    }
  }
  return out.empty() ? "0" : out;
}

std::vector<FFElem> all_elements(const FieldPtr& field) {
  std::vector<FFElem> out;
  out.reserve(field->order());
  for (unsigned long n = 0; n < field->order(); ++n) out.push_back(FFElem::from_index(field, n));
  return out;
}

std::vector<FFElem> as_roots_in_field(const FFElem& rhs) {
  std::vector<FFElem> out;
  for (const FFElem& y : all_elements(rhs.field()))
    if (y.pow(rhs.field()->p()) - y == rhs) out.push_back(y);
  assert(out.empty() || out.size() == rhs.field()->p());
  return out;
}

}  // namespace hahnlab
