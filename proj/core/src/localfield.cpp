#include "mumford/localfield.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

namespace mumford {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

mpz_class parse_integer(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed integer '" + s + "'");
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw std::invalid_argument("malformed integer '" + s + "'");
  return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

}  // namespace

long padic_valuation(const mpz_class& n, long p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  mpz_class rest;
  mpz_class pz(p);
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

mpq_class parse_rational(std::string_view text, long p) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  bool negate = false;
  if (s[0] == '-' && s.find_first_of("*/^") != std::string::npos) {
    negate = true;
    s = trim(s.substr(1));
  }
  mpq_class result(1);
  std::stringstream ss(s);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    factor = trim(factor);
    if (factor.empty()) throw std::invalid_argument("malformed rational '" + s + "'");
    if (auto caret = factor.find('^'); caret != std::string::npos) {
      std::string base = trim(factor.substr(0, caret));
      long exp = parse_integer(trim(factor.substr(caret + 1))).get_si();
      mpz_class b = (base == "p") ? mpz_class(p) : parse_integer(base);
      if (b == 0) throw std::invalid_argument("zero base in '" + factor + "'");
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(exp < 0 ? -exp : exp));
      result *= exp < 0 ? mpq_class(mpz_class(1), pw) : mpq_class(pw);
    } else if (auto slash = factor.find('/'); slash != std::string::npos) {
      mpz_class num = parse_integer(trim(factor.substr(0, slash)));
      mpz_class den = parse_integer(trim(factor.substr(slash + 1)));
      if (den == 0) throw std::invalid_argument("zero denominator in '" + factor + "'");
      mpq_class q(num, den);
      q.canonicalize();
      result *= q;
    } else {
      result *= mpq_class(parse_integer(factor));
    }
  }
  result.canonicalize();
  return negate ? mpq_class(-result) : result;
}

// ---------------------------------------------------------------------------
// FieldDescriptor

FieldDescriptor::FieldDescriptor(long p, int e, long c, int max_prec)
    : p_(p), e_(e), c_(c), max_prec_(max_prec) {
  const long count = max_prec / e + 3;
  powers_.reserve(static_cast<size_t>(count));
  powers_.emplace_back(1);
  for (long k = 1; k < count; ++k) powers_.push_back(powers_.back() * p);
}

FieldPtr FieldDescriptor::qp(long p, int max_precision) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  return FieldPtr(new FieldDescriptor(p, 1, 1, max_precision));
}

FieldPtr FieldDescriptor::eisenstein(long p, const mpq_class& c, int max_precision) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  mpz_class ci = c.get_num() * c.get_den();
  if (ci % p == 0) throw std::invalid_argument("Eisenstein constant must be a p-adic unit");
  if (!ci.fits_slong_p()) throw std::invalid_argument("Eisenstein constant too large");
  return FieldPtr(new FieldDescriptor(p, 2, ci.get_si(), max_precision));
}

void FieldDescriptor::check_precision(int r) const {
  if (r > max_prec_)
    throw PrecisionError("requested precision " + std::to_string(r) + " exceeds field cap " +
                         std::to_string(max_prec_));
}

const mpz_class& FieldDescriptor::p_power(long k) const {
  if (k < 0 || k >= static_cast<long>(powers_.size()))
    throw PrecisionError("p-power " + std::to_string(k) + " outside precomputed range");
  return powers_[static_cast<size_t>(k)];
}

void FieldDescriptor::reduce(Integral& a, int r) const {
  if (r <= 0) {
    a.x = 0;
    a.y = 0;
    return;
  }
  check_precision(r);
  if (e_ == 1) {
    mpz_mod(a.x.get_mpz_t(), a.x.get_mpz_t(), p_power(r).get_mpz_t());
    return;
  }
  mpz_mod(a.x.get_mpz_t(), a.x.get_mpz_t(), p_power((r + 1) / 2).get_mpz_t());
  mpz_mod(a.y.get_mpz_t(), a.y.get_mpz_t(), p_power(r / 2).get_mpz_t());
}

Integral FieldDescriptor::mul(const Integral& a, const Integral& b) const {
  Integral r;
  if (e_ == 1) {
    mpz_mul(r.x.get_mpz_t(), a.x.get_mpz_t(), b.x.get_mpz_t());
    return r;
  }
  mpz_class yy = a.y * b.y;
  r.x = a.x * b.x + yy * (c_ * p_);
  r.y = a.x * b.y + a.y * b.x;
  return r;
}

Integral FieldDescriptor::add(const Integral& a, const Integral& b) const {
  Integral r;
  r.x = a.x + b.x;
  if (e_ == 2) r.y = a.y + b.y;
  return r;
}

Integral FieldDescriptor::neg(const Integral& a) const {
  Integral r;
  r.x = -a.x;
  if (e_ == 2) r.y = -a.y;
  return r;
}

Integral FieldDescriptor::mul_pi(const Integral& a, int k) const {
  if (k == 0) return a;
  if (e_ == 1) return Integral{a.x * p_power(k), 0};
  Integral r = a;
  const int half = k / 2;
  if (half > 0) {
    mpz_class cp;
    mpz_class cz(c_);
    mpz_pow_ui(cp.get_mpz_t(), cz.get_mpz_t(), static_cast<unsigned long>(half));
    cp *= p_power(half);
    r.x *= cp;
    r.y *= cp;
  }
  if (k % 2 == 1) {
    mpz_class nx = r.y * (c_ * p_);
    r.y = r.x;
    r.x = nx;
  }
  return r;
}

Integral FieldDescriptor::div_pi(const Integral& a, int k) const {
  if (k == 0) return a;
  if (e_ == 1) {
    Integral r;
    mpz_divexact(r.x.get_mpz_t(), a.x.get_mpz_t(), p_power(k).get_mpz_t());
    return r;
  }
  // (x + y pi) / pi = y + (x / (c p)) pi.  Division by c is done modulo a
  // power of p large enough for every digit that survives later reduction.
  Integral r = a;
  const long modexp = max_prec_ / 2 + 2;
  mpz_class cinv(c_);
  mpz_invert(cinv.get_mpz_t(), cinv.get_mpz_t(), p_power(modexp).get_mpz_t());
  for (int i = 0; i < k; ++i) {
    mpz_class xp;
    mpz_divexact_ui(xp.get_mpz_t(), r.x.get_mpz_t(), static_cast<unsigned long>(p_));
    mpz_class ny = xp * cinv;
    mpz_mod(ny.get_mpz_t(), ny.get_mpz_t(), p_power(modexp).get_mpz_t());
    r.x = r.y;
    r.y = ny;
  }
  return r;
}

int FieldDescriptor::valuation(const Integral& a, int cap) const {
  auto vp = [this](const mpz_class& n, long cap_p) -> long {
    if (n == 0) return cap_p;
    return std::min(cap_p, padic_valuation(n, p_));
  };
  if (e_ == 1) return static_cast<int>(vp(a.x, cap));
  long vx = vp(a.x, cap) * 2;
  long vy = vp(a.y, cap) * 2 + 1;
  return static_cast<int>(std::min<long>({vx, vy, cap}));
}

Integral FieldDescriptor::unit_inverse(const Integral& a, int r) const {
  check_precision(r);
  Integral out;
  if (e_ == 1) {
    if (mpz_invert(out.x.get_mpz_t(), a.x.get_mpz_t(), p_power(r).get_mpz_t()) == 0)
      throw DivisionByZero("inverse of a non-unit");
    return out;
  }
  const int k = (r + 1) / 2 + 1;
  mpz_class norm = a.x * a.x - a.y * a.y * (c_ * p_);
  mpz_class ninv;
  if (mpz_invert(ninv.get_mpz_t(), norm.get_mpz_t(), p_power(k).get_mpz_t()) == 0)
    throw DivisionByZero("inverse of a non-unit");
  out.x = a.x * ninv;
  out.y = -a.y * ninv;
  reduce(out, r);
  return out;
}

bool FieldDescriptor::is_zero_mod(const Integral& a, int r) const { return valuation(a, r) >= r; }

std::string FieldDescriptor::pi_name() const { return e_ == 1 ? std::to_string(p_) : "pi"; }

// ---------------------------------------------------------------------------
// LocalFieldElement

LocalFieldElement LocalFieldElement::zero(const FieldPtr& field, int prec) {
  LocalFieldElement z;
  z.field_ = field;
  z.val_ = prec;
  z.rel_ = 0;
  return z;
}

LocalFieldElement LocalFieldElement::one(const FieldPtr& field, int prec) {
  return from_integer(1, field, prec);
}

LocalFieldElement LocalFieldElement::from_integer(long n, const FieldPtr& field, int prec) {
  return from_rational(mpz_class(n), mpz_class(1), field, prec);
}

LocalFieldElement LocalFieldElement::uniformizer_power(int k, const FieldPtr& field, int prec) {
  if (prec <= k) return zero(field, prec);
  return from_unit(field, k, Integral{1, 0}, prec - k);
}

LocalFieldElement LocalFieldElement::from_rational(const mpq_class& q, const FieldPtr& field,
                                                   int prec) {
  return from_rational(q.get_num(), q.get_den(), field, prec);
}

LocalFieldElement LocalFieldElement::from_rational(const mpz_class& num, const mpz_class& den,
                                                   const FieldPtr& field, int prec) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (num == 0) return zero(field, prec);
  const long p = field->prime();
  const int e = field->e();
  mpz_class pz(p), un, ud;
  long a = static_cast<long>(mpz_remove(un.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t()));
  long b = static_cast<long>(mpz_remove(ud.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()));
  const int val = static_cast<int>((a - b) * e);
  const int rel = prec - val;
  if (rel <= 0) return zero(field, prec);
  const int k = ceil_div(rel, e) + 1;
  const mpz_class& mod = field->p_power(k);
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw std::logic_error("denominator unit not invertible");
  mpz_class u = un * inv;
  if (e == 2 && a != b) {
    // p^(a-b) = pi^(2(a-b)) c^(b-a)
    mpz_class cz(field->eisenstein_c()), cpow;
    if (b > a) {
      mpz_powm_ui(cpow.get_mpz_t(), cz.get_mpz_t(), static_cast<unsigned long>(b - a),
                  mod.get_mpz_t());
    } else {
      mpz_invert(cz.get_mpz_t(), cz.get_mpz_t(), mod.get_mpz_t());
      mpz_powm_ui(cpow.get_mpz_t(), cz.get_mpz_t(), static_cast<unsigned long>(a - b),
                  mod.get_mpz_t());
    }
    u *= cpow;
  }
  LocalFieldElement r;
  r.field_ = field;
  r.val_ = val;
  r.rel_ = rel;
  r.unit_ = Integral{u, 0};
  field->reduce(r.unit_, rel);
  return r;
}

LocalFieldElement LocalFieldElement::from_unit(const FieldPtr& field, int val, Integral unit,
                                               int rel) {
  LocalFieldElement r;
  r.field_ = field;
  field->reduce(unit, rel);
  r.normalize_from(unit, val, val + rel);
  return r;
}

void LocalFieldElement::normalize_from(const Integral& s, int base_val, int N) {
  const int avail = N - base_val;
  if (avail <= 0) {
    val_ = N;
    rel_ = 0;
    unit_ = Integral{};
    return;
  }
  const int k = field_->valuation(s, avail);
  if (k >= avail) {
    val_ = N;
    rel_ = 0;
    unit_ = Integral{};
    return;
  }
  val_ = base_val + k;
  rel_ = N - val_;
  unit_ = field_->div_pi(s, k);
  field_->reduce(unit_, rel_);
}

std::optional<mpq_class> LocalFieldElement::valuation_rational() const {
  if (rel_ == 0) return std::nullopt;
  mpq_class q(val_, field_->e());
  q.canonicalize();
  return q;
}

void LocalFieldElement::check_same_field(const LocalFieldElement& b) const {
  if (!field_ || !b.field_) throw std::invalid_argument("uninitialized field element");
  if (field_ != b.field_ && !(*field_ == *b.field_))
    throw FieldMismatch("field descriptors differ");
}

LocalFieldElement LocalFieldElement::with_precision(int prec) const {
  if (prec >= abs_precision()) return *this;
  if (prec <= val_ || rel_ == 0) return zero(field_, std::min(prec, abs_precision()));
  LocalFieldElement r = *this;
  r.rel_ = prec - val_;
  field_->reduce(r.unit_, r.rel_);
  return r;
}

LocalFieldElement LocalFieldElement::operator-() const {
  LocalFieldElement r = *this;
  if (rel_ > 0) {
    r.unit_ = field_->neg(unit_);
    field_->reduce(r.unit_, rel_);
  }
  return r;
}

LocalFieldElement& LocalFieldElement::operator+=(const LocalFieldElement& b) {
  check_same_field(b);
  const int N = std::min(abs_precision(), b.abs_precision());
  const int v = std::min(val_, b.val_);
  if (v >= N) {
    *this = zero(field_, N);
    return *this;
  }
  Integral s;
  if (rel_ > 0 && val_ < N) s = field_->mul_pi(unit_, val_ - v);
  if (b.rel_ > 0 && b.val_ < N) s = field_->add(s, field_->mul_pi(b.unit_, b.val_ - v));
  field_->reduce(s, N - v);
  normalize_from(s, v, N);
  return *this;
}

LocalFieldElement& LocalFieldElement::operator-=(const LocalFieldElement& b) {
  return *this += -b;
}

LocalFieldElement& LocalFieldElement::operator*=(const LocalFieldElement& b) {
  check_same_field(b);
  const int v = val_ + b.val_;
  if (rel_ == 0 || b.rel_ == 0) {
    // A zero operand carries its absolute precision in val_.
    *this = zero(field_, v);
    return *this;
  }
  rel_ = std::min(rel_, b.rel_);
  val_ = v;
  unit_ = field_->mul(unit_, b.unit_);
  field_->reduce(unit_, rel_);
  return *this;
}

LocalFieldElement& LocalFieldElement::operator/=(const LocalFieldElement& b) {
  check_same_field(b);
  if (b.rel_ == 0) throw DivisionByZero("division by an element that is zero to its precision");
  if (rel_ == 0) {
    *this = zero(field_, val_ - b.val_);
    return *this;
  }
  rel_ = std::min(rel_, b.rel_);
  val_ -= b.val_;
  unit_ = field_->mul(unit_, field_->unit_inverse(b.unit_, rel_));
  field_->reduce(unit_, rel_);
  return *this;
}

LocalFieldElement LocalFieldElement::inverse() const {
  return one(field_, rel_ + 1) / *this;
}

LocalFieldElement LocalFieldElement::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  if (k == 0) return one(field_, std::max(rel_, 1));
  if (rel_ == 0) return zero(field_, static_cast<int>(val_ * k));
  LocalFieldElement r;
  r.field_ = field_;
  r.rel_ = rel_;
  r.val_ = static_cast<int>(val_ * k);
  Integral u{1, 0}, base = unit_;
  long n = k;
  while (n > 0) {
    if (n & 1) {
      u = field_->mul(u, base);
      field_->reduce(u, rel_);
    }
    n >>= 1;
    if (n) {
      base = field_->mul(base, base);
      field_->reduce(base, rel_);
    }
  }
  r.unit_ = u;
  return r;
}

Integral LocalFieldElement::to_integral(int N) const {
  if (rel_ == 0 || val_ >= N) return Integral{};
  if (val_ < 0) throw PrecisionError("element is not integral");
  Integral r = field_->mul_pi(unit_, val_);
  field_->reduce(r, N);
  return r;
}

namespace {

// Successive pi-adic digits of a unit known modulo pi^rel.
std::vector<long> pi_digits(const FieldDescriptor& f, Integral s, int rel, int max_count) {
  std::vector<long> digits;
  const int count = std::min(rel, max_count);
  for (int i = 0; i < count; ++i) {
    mpz_class d;
    mpz_mod_ui(d.get_mpz_t(), s.x.get_mpz_t(), static_cast<unsigned long>(f.prime()));
    digits.push_back(d.get_si());
    s.x -= d;
    if (i + 1 < count) {
      s = f.div_pi(s, 1);
      f.reduce(s, rel - i - 1);
    }
  }
  return digits;
}

}  // namespace

std::string LocalFieldElement::to_string() const {
  if (!field_) return "<invalid>";
  const std::string pi = field_->pi_name();
  auto power = [&](int k) -> std::string {
    if (k == 0) return "";
    if (k == 1) return pi;
    return pi + "^" + std::to_string(k);
  };
  std::ostringstream os;
  if (rel_ > 0) {
    auto digits = pi_digits(*field_, unit_, rel_, rel_);
    bool first = true;
    for (size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] == 0) continue;
      const int k = val_ + static_cast<int>(i);
      if (!first) os << " + ";
      first = false;
      if (k == 0) {
        os << digits[i];
      } else if (digits[i] == 1) {
        os << power(k);
      } else {
        os << digits[i] << "*" << power(k);
      }
    }
    os << " + ";
  }
  os << "O(" << (abs_precision() == 1 ? pi : pi + "^" + std::to_string(abs_precision())) << ")";
  return os.str();
}

std::string LocalFieldElement::fingerprint(int digits) const {
  if (rel_ == 0) return "0";
  static constexpr char kAlphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out = "v" + std::to_string(val_) + ":";
  for (long d : pi_digits(*field_, unit_, rel_, digits)) {
    if (field_->prime() <= 36) {
      out.push_back(kAlphabet[d]);
    } else {
      out += std::to_string(d) + ".";
    }
  }
  return out;
}

namespace {

// One summand: rational factors times an optional power of pi.
LocalFieldElement parse_term(const std::string& term, const FieldPtr& field, int prec) {
  std::string rational;
  int pi_exp = 0;
  std::stringstream ss(term);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    factor = trim(factor);
    if (factor == "pi") {
      pi_exp += 1;
    } else if (factor.rfind("pi^", 0) == 0) {
      pi_exp += static_cast<int>(parse_integer(trim(factor.substr(3))).get_si());
    } else {
      rational += (rational.empty() ? "" : "*") + factor;
    }
  }
  if (pi_exp != 0 && field->e() == 1)
    throw std::invalid_argument("'pi' used in an unramified field: '" + term + "'");
  mpq_class q = rational.empty() ? mpq_class(1) : parse_rational(rational, field->prime());
  auto x = LocalFieldElement::from_rational(q, field, prec - pi_exp);
  return pi_exp == 0 ? x : x.shifted(pi_exp);
}

}  // namespace

LocalFieldElement parse_element(std::string_view text, const FieldPtr& field, int prec) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty element");
  // Split into signed summands at '+' and binary '-'.
  std::vector<std::pair<bool, std::string>> terms;
  bool neg = false;
  std::string cur;
  for (size_t k = 0; k < s.size(); ++k) {
    const char ch = s[k];
    const bool binary = !trim(cur).empty() && !std::strchr("*/^", trim(cur).back());
    if ((ch == '+' || ch == '-') && binary) {
      terms.emplace_back(neg, trim(cur));
      neg = ch == '-';
      cur.clear();
    } else if (ch == '-' && trim(cur).empty()) {
      neg = !neg;
    } else {
      cur += ch;
    }
  }
  if (trim(cur).empty()) throw std::invalid_argument("malformed element '" + s + "'");
  terms.emplace_back(neg, trim(cur));
  LocalFieldElement sum;
  for (const auto& [minus, t] : terms) {
    auto x = parse_term(t, field, prec);
    if (minus) x = -x;
    sum = sum.valid() ? sum + x : x;
  }
  return sum;
}

}  // namespace mumford
