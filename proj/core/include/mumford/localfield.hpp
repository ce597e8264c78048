#pragma once

// Capped-precision arithmetic in Q_p and in a totally ramified quadratic
// extension Q_p(pi), pi^2 = c*p.  Valuations are counted in units of v(pi),
// so they are plain integers; divide by e() to get the p-adic valuation.

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mumford {

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact p-adic valuation of a nonzero integer.
long padic_valuation(const mpz_class& n, long p);

// Parses "num/den", "m*p^k", "m*3^-2", "-7" and products of such factors.
// A literal 'p' base is replaced by the given prime.
mpq_class parse_rational(std::string_view text, long p);

// An element x + y*pi of O_K, stored with x, y integers.  For e = 1 the y
// component is always zero.
struct Integral {
  mpz_class x;
  mpz_class y;
};

class FieldDescriptor;
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

class FieldDescriptor : public std::enable_shared_from_this<FieldDescriptor> {
 public:
  // e = 2 builds Q_p(pi) with pi^2 = c*p.  A rational c = a/b is replaced by
  // the integer a*b, which corresponds to the uniformizer b*pi.
  static FieldPtr qp(long p, int max_precision = 4096);
  static FieldPtr eisenstein(long p, const mpq_class& c, int max_precision = 4096);

  long prime() const { return p_; }
  int e() const { return e_; }
  long eisenstein_c() const { return c_; }
  int max_precision() const { return max_prec_; }

  bool operator==(const FieldDescriptor& o) const {
    return p_ == o.p_ && e_ == o.e_ && c_ == o.c_;
  }

  const mpz_class& p_power(long k) const;

  // Reduces a modulo pi^r (r >= 0).
  void reduce(Integral& a, int r) const;
  Integral mul(const Integral& a, const Integral& b) const;
  Integral add(const Integral& a, const Integral& b) const;
  Integral neg(const Integral& a) const;
  // Multiplication by pi^k, k >= 0.
  Integral mul_pi(const Integral& a, int k) const;
  // Exact division by pi^k; a must be divisible.
  Integral div_pi(const Integral& a, int k) const;
  // Valuation of a, or `cap` if a is divisible by pi^cap.
  int valuation(const Integral& a, int cap) const;
  // Inverse of a unit modulo pi^r.
  Integral unit_inverse(const Integral& a, int r) const;
  bool is_zero_mod(const Integral& a, int r) const;

  std::string pi_name() const;

 private:
  FieldDescriptor(long p, int e, long c, int max_prec);
  void check_precision(int r) const;

  long p_;
  int e_;
  long c_;
  int max_prec_;
  std::vector<mpz_class> powers_;
};

// Element of K known modulo pi^N.  The value is pi^val * unit where unit is
// a unit known modulo pi^rel; rel == 0 means the element is zero to
// absolute precision val.
class LocalFieldElement {
 public:
  LocalFieldElement() = default;

  static LocalFieldElement from_rational(const mpz_class& num, const mpz_class& den,
                                         const FieldPtr& field, int prec);
  static LocalFieldElement from_rational(const mpq_class& q, const FieldPtr& field,
                                         int prec);
  static LocalFieldElement from_integer(long n, const FieldPtr& field, int prec);
  static LocalFieldElement zero(const FieldPtr& field, int prec);
  static LocalFieldElement one(const FieldPtr& field, int prec);
  // pi^k with absolute precision prec.
  static LocalFieldElement uniformizer_power(int k, const FieldPtr& field, int prec);
  // pi^val * (x + y pi) with relative precision rel.
  static LocalFieldElement from_unit(const FieldPtr& field, int val, Integral unit, int rel);

  const FieldPtr& field() const { return field_; }
  bool valid() const { return field_ != nullptr; }

  bool is_zero() const { return rel_ == 0; }
  // Valuation in units of v(pi); nullopt for zero-to-precision.
  std::optional<int> valuation() const {
    if (rel_ == 0) return std::nullopt;
    return val_;
  }
  // Valuation if nonzero, otherwise the absolute precision (a lower bound).
  int valuation_or_precision() const { return val_; }
  // Exact p-adic valuation as a rational with denominator e.
  std::optional<mpq_class> valuation_rational() const;
  int abs_precision() const { return val_ + rel_; }
  int rel_precision() const { return rel_; }
  const Integral& unit() const { return unit_; }

  // Exact multiplication by pi^k.
  LocalFieldElement shifted(int k) const {
    LocalFieldElement r = *this;
    r.val_ += k;
    return r;
  }

  // Lowers the absolute precision to at most prec.
  LocalFieldElement with_precision(int prec) const;

  LocalFieldElement operator-() const;
  LocalFieldElement& operator+=(const LocalFieldElement& b);
  LocalFieldElement& operator-=(const LocalFieldElement& b);
  LocalFieldElement& operator*=(const LocalFieldElement& b);
  LocalFieldElement& operator/=(const LocalFieldElement& b);
  friend LocalFieldElement operator+(LocalFieldElement a, const LocalFieldElement& b) {
    return a += b;
  }
  friend LocalFieldElement operator-(LocalFieldElement a, const LocalFieldElement& b) {
    return a -= b;
  }
  friend LocalFieldElement operator*(LocalFieldElement a, const LocalFieldElement& b) {
    return a *= b;
  }
  friend LocalFieldElement operator/(LocalFieldElement a, const LocalFieldElement& b) {
    return a /= b;
  }

  LocalFieldElement inverse() const;
  LocalFieldElement pow(long k) const;

  // Equality modulo pi^min(N1, N2).
  bool equals(const LocalFieldElement& b) const { return (*this - b).is_zero(); }

  // The residue of the element as an integral x + y*pi modulo pi^N, for
  // elements with nonnegative valuation.
  Integral to_integral(int N) const;

  // "2 + 3 + 2*3^2 + O(3^20)".
  std::string to_string() const;
  // The first `digits` pi-adic digits starting at the valuation, e.g.
  // "v-8:2101".
  std::string fingerprint(int digits) const;

 private:
  void check_same_field(const LocalFieldElement& b) const;
  void normalize_from(const Integral& s, int base_val, int N);

  FieldPtr field_;
  int val_ = 0;
  int rel_ = 0;
  Integral unit_;
};

// Rational shorthand helper used by file formats.
LocalFieldElement parse_element(std::string_view text, const FieldPtr& field, int prec);

}  // namespace mumford
