#pragma once

#include <memory>
#include <string>
#include <vector>

namespace hahnlab {

// Description of F_{p^m} = F_p[u]/(modulus).  The modulus is monic of degree
// m, stored low coefficient first, and must be irreducible.  When none is
// supplied, the least monic irreducible polynomial in the base-p numeric
// order (sum c_i p^i) is chosen; for p=3, m=2 that is u^2 + 1.
class FieldSpec {
 public:
  static std::shared_ptr<const FieldSpec> make(unsigned p, unsigned m);
  static std::shared_ptr<const FieldSpec> make(unsigned p, unsigned m,
                                               std::vector<unsigned> modulus);

  unsigned p() const { return p_; }
  unsigned m() const { return m_; }
  const std::vector<unsigned>& modulus() const { return modulus_; }
  unsigned long order() const { return order_; }  // p^m

  static std::vector<unsigned> default_modulus(unsigned p, unsigned m);

 private:
  FieldSpec(unsigned p, unsigned m, std::vector<unsigned> modulus);
  unsigned p_, m_;
  unsigned long order_;
  std::vector<unsigned> modulus_;
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

// Element of F_{p^m}: coefficient vector of length m over F_p.  Value
// semantics; all arithmetic is exact.
class FFElem {
 public:
  static FFElem zero(FieldPtr field);
  static FFElem one(FieldPtr field);
  static FFElem from_int(FieldPtr field, long v);  // v mod p in the prime subfield
  static FFElem u(FieldPtr field);                 // the residue of the generator
  static FFElem from_coeffs(FieldPtr field, const std::vector<long>& coeffs);
  // Element with index n in the enumeration order n = sum c_i p^i.
  static FFElem from_index(FieldPtr field, unsigned long n);

  const FieldPtr& field() const { return field_; }
  const std::vector<unsigned>& coeffs() const { return c_; }
  unsigned long index() const;
  bool is_zero() const;

  bool operator==(const FFElem& o) const;
  bool operator!=(const FFElem& o) const { return !(*this == o); }

  FFElem operator+(const FFElem& o) const;
  FFElem operator-(const FFElem& o) const;
  FFElem operator-() const;
  FFElem operator*(const FFElem& o) const;
  FFElem operator/(const FFElem& o) const;
  FFElem inverse() const;  // throws std::domain_error on zero
  FFElem pow(unsigned long e) const;
  FFElem int_scale(long k) const;  // (k mod p) * x

  FFElem frobenius() const;          // x^p
  FFElem frobenius_inverse() const;  // the unique p-th root

  // Polynomial in u, high degree first: "2*u+1", "u^2+2", "0".
  std::string str() const;

 private:
  FFElem(FieldPtr field, std::vector<unsigned> c) : field_(std::move(field)), c_(std::move(c)) {}
  FieldPtr field_;
  std::vector<unsigned> c_;
};

void require_same_field(const FFElem& a, const FFElem& b);

// All p^m elements in index order.
std::vector<FFElem> all_elements(const FieldPtr& field);

// Solutions y of y^p - y = rhs inside the field, in index order.  Either
// empty or a full additive coset of the prime subfield (p elements).
std::vector<FFElem> as_roots_in_field(const FFElem& rhs);

}  // namespace hahnlab
