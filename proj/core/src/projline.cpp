#include "mumford/projline.hpp"

#include <algorithm>
#include <sstream>

namespace mumford {

// ---------------------------------------------------------------------------
// ProjPoint

const LocalFieldElement& ProjPoint::value() const {
  if (!z_) throw std::logic_error("value() of the point at infinity");
  return *z_;
}

bool ProjPoint::equals(const ProjPoint& o) const {
  if (is_infinity() || o.is_infinity()) return is_infinity() && o.is_infinity();
  return z_->equals(*o.z_);
}

std::string ProjPoint::to_string() const { return z_ ? z_->to_string() : "inf"; }

// ---------------------------------------------------------------------------
// Moebius

Moebius::Moebius(LocalFieldElement a, LocalFieldElement b, LocalFieldElement c,
                 LocalFieldElement d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

Moebius Moebius::identity(const FieldPtr& field, int prec) {
  auto one = LocalFieldElement::one(field, prec);
  auto zero = LocalFieldElement::zero(field, prec);
  return Moebius(one, zero, zero, one);
}

LocalFieldElement Moebius::apply_finite(const LocalFieldElement& z) const {
  auto den = c_ * z + d_;
  if (den.is_zero()) throw DivisionByZero("point is mapped to infinity");
  return (a_ * z + b_) / den;
}

ProjPoint Moebius::apply(const ProjPoint& z) const {
  if (z.is_infinity()) {
    if (c_.is_zero()) return ProjPoint::infinity();
    return ProjPoint(a_ / c_);
  }
  auto den = c_ * z.value() + d_;
  if (den.is_zero()) return ProjPoint::infinity();
  return ProjPoint((a_ * z.value() + b_) / den);
}

Moebius operator*(const Moebius& g, const Moebius& h) {
  return Moebius(g.a_ * h.a_ + g.b_ * h.c_, g.a_ * h.b_ + g.b_ * h.d_,
                 g.c_ * h.a_ + g.d_ * h.c_, g.c_ * h.b_ + g.d_ * h.d_)
      .normalized();
}

Moebius Moebius::inverse() const { return Moebius(d_, -b_, -c_, a_); }

Moebius Moebius::normalized() const {
  int k = 0;
  bool any = false;
  for (const auto* x : {&a_, &b_, &c_, &d_}) {
    if (auto v = x->valuation()) {
      k = any ? std::min(k, *v) : *v;
      any = true;
    }
  }
  if (!any || k == 0) return *this;
  return Moebius(a_.shifted(-k), b_.shifted(-k), c_.shifted(-k), d_.shifted(-k));
}

bool Moebius::projectively_equals(const Moebius& o) const {
  const Moebius x = normalized(), y = o.normalized();
  const LocalFieldElement* u[4] = {&x.a_, &x.b_, &x.c_, &x.d_};
  const LocalFieldElement* w[4] = {&y.a_, &y.b_, &y.c_, &y.d_};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!((*u[i]) * (*w[j]) - (*u[j]) * (*w[i])).is_zero()) return false;
  return true;
}

ProjPoint Moebius::pole() const {
  if (c_.is_zero()) return ProjPoint::infinity();
  return ProjPoint(-d_ / c_);
}

LocalFieldElement Moebius::derivative(const ProjPoint& P) const {
  if (P.is_infinity()) {
    if (c_.is_zero()) throw DivisionByZero("g'(infinity) undefined for c = 0");
    return det() / (c_ * c_);
  }
  auto den = c_ * P.value() + d_;
  if (den.is_zero()) throw DivisionByZero("derivative at the pole");
  return det() / (den * den);
}

bool Moebius::is_hyperbolic() const {
  auto vt = trace().valuation();
  auto vd = det().valuation();
  if (!vd) throw DivisionByZero("singular matrix");
  if (!vt) return false;
  return 2 * *vt < *vd;
}

int Moebius::precision() const {
  return std::min({a_.abs_precision(), b_.abs_precision(), c_.abs_precision(),
                   d_.abs_precision()});
}

std::string Moebius::to_string() const {
  std::ostringstream os;
  os << "[[" << a_.to_string() << ", " << b_.to_string() << "], [" << c_.to_string() << ", "
     << d_.to_string() << "]]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Ball

namespace {

// Valuation of z - c, or nullopt when the difference vanishes to its
// precision.  `lower` receives the known lower bound in that case.
std::optional<int> distance_val(const LocalFieldElement& z, const LocalFieldElement& c,
                                int& lower) {
  auto diff = z - c;
  lower = diff.valuation_or_precision();
  return diff.valuation();
}

}  // namespace

bool Ball::contains(const ProjPoint& z) const {
  if (z.is_infinity()) return kind == Kind::Complement;
  int lower = 0;
  auto v = distance_val(z.value(), center, lower);
  if (!v) {
    if (lower <= radius_val)
      throw PrecisionError("cannot decide ball membership at this precision");
    return kind == Kind::Disk;
  }
  switch (kind) {
    case Kind::Disk:
      return closed ? *v >= radius_val : *v > radius_val;
    case Kind::Complement:
      return closed ? *v <= radius_val : *v < radius_val;
  }
  return false;
}

bool Ball::on_boundary(const ProjPoint& z) const {
  if (z.is_infinity()) return false;
  int lower = 0;
  auto v = distance_val(z.value(), center, lower);
  if (!v) {
    if (lower <= radius_val)
      throw PrecisionError("cannot decide boundary membership at this precision");
    return false;
  }
  return *v == radius_val;
}

Ball Ball::closure() const {
  Ball b = *this;
  b.closed = true;
  return b;
}

Ball Ball::complement() const {
  Ball b = *this;
  b.kind = kind == Kind::Disk ? Kind::Complement : Kind::Disk;
  b.closed = !closed;
  return b;
}

int Ball::kpoint_radius() const {
  if (kind == Kind::Disk) return closed ? radius_val : radius_val + 1;
  return closed ? radius_val + 1 : radius_val;
}

bool Ball::same_set(const Ball& o) const {
  if (kind != o.kind) return false;
  const int R = kpoint_radius();
  if (R != o.kpoint_radius()) return false;
  return (center - o.center).valuation_or_precision() >= R;
}

std::string Ball::to_string() const {
  const auto& f = center.field();
  std::ostringstream os;
  if (kind == Kind::Complement) os << "P1 - ";
  os << "B(" << center.to_string() << ", " << f->prime() << "^";
  if (radius_val % f->e() == 0) {
    os << -(radius_val / f->e());
  } else {
    os << -radius_val << "/" << f->e();
  }
  os << ")";
  // Closed disks and open complements carry the "+" of B(c, r+).
  const bool plus = (kind == Kind::Disk) == closed;
  if (plus) os << "+";
  return os.str();
}

bool balls_disjoint(const Ball& x, const Ball& y) {
  using K = Ball::Kind;
  if (x.kind == K::Complement && y.kind == K::Complement) return false;
  const int Rx = x.kpoint_radius(), Ry = y.kpoint_radius();
  const int dist = (x.center - y.center).valuation_or_precision();
  if (x.kind == K::Disk && y.kind == K::Disk) return dist < std::min(Rx, Ry);
  // A disk misses a complement exactly when it sits inside the removed disk.
  const Ball& disk = x.kind == K::Disk ? x : y;
  const Ball& comp = x.kind == K::Disk ? y : x;
  return disk.kpoint_radius() >= comp.kpoint_radius() && dist >= comp.kpoint_radius();
}

Ball ball_image(const Moebius& g, const Ball& B) {
  if (B.kind == Ball::Kind::Complement) return ball_image(g, B.complement()).complement();
  const ProjPoint pole = g.pole();
  const ProjPoint P(B.center);
  bool pole_inside = false;
  if (!pole.is_infinity()) {
    int lower = 0;
    auto v = distance_val(pole.value(), B.center, lower);
    const int dv = v ? *v : lower;
    if (!v && lower <= B.radius_val)
      throw PrecisionError("cannot locate the pole relative to the ball");
    if (!B.closed && v && *v == B.radius_val)
      throw BoundaryDegeneracy("g^{-1}(inf) lies on the boundary of an open ball");
    pole_inside = B.closed ? dv >= B.radius_val : dv > B.radius_val;
  }
  if (!pole_inside) {
    auto gp = g.derivative(P).valuation();
    if (!gp) throw PrecisionError("derivative vanishes to precision");
    return Ball{Ball::Kind::Disk, g.apply(P).value(), B.radius_val + *gp, B.closed};
  }
  auto ginf = g.derivative(ProjPoint::infinity()).valuation();
  if (!ginf) throw PrecisionError("derivative vanishes to precision");
  return Ball{Ball::Kind::Complement, g.apply(ProjPoint::infinity()).value(),
              *ginf - B.radius_val, B.closed};
}

namespace {

std::string strip(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

int parse_radius(const std::string& text, const FieldPtr& field) {
  const long p = field->prime();
  const int e = field->e();
  if (auto caret = text.find('^'); caret != std::string::npos) {
    std::string base = strip(text.substr(0, caret));
    std::string exp = strip(text.substr(caret + 1));
    if (base != "p" && base != std::to_string(p))
      throw std::invalid_argument("radius must be a power of p: '" + text + "'");
    mpq_class q(exp);
    q.canonicalize();
    mpq_class units = -q * e;
    units.canonicalize();
    if (units.get_den() != 1)
      throw std::invalid_argument("radius outside the value group: '" + text + "'");
    return static_cast<int>(units.get_num().get_si());
  }
  mpq_class r = parse_rational(text, p);
  if (r <= 0) throw std::invalid_argument("radius must be positive: '" + text + "'");
  mpz_class num = r.get_num(), den = r.get_den();
  long vn = padic_valuation(num, p), vd = padic_valuation(den, p);
  mpz_class pz(p), rn, rd;
  mpz_remove(rn.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t());
  mpz_remove(rd.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
  if (rn != 1 || rd != 1)
    throw std::invalid_argument("radius must be a power of p: '" + text + "'");
  return static_cast<int>((vd - vn) * e);
}

}  // namespace

Ball parse_ball(std::string_view text, const FieldPtr& field, int prec) {
  std::string s = strip(text);
  Ball b;
  if (s.rfind("P1", 0) == 0) {
    b.kind = Ball::Kind::Complement;
    auto dash = s.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("malformed ball '" + s + "'");
    s = strip(s.substr(dash + 1));
  }
  bool plus = false;
  if (!s.empty() && s.back() == '+') {
    plus = true;
    s = strip(s.substr(0, s.size() - 1));
  }
  if (s.rfind("B(", 0) != 0 || s.back() != ')')
    throw std::invalid_argument("malformed ball '" + std::string(text) + "'");
  std::string inner = s.substr(2, s.size() - 3);
  auto comma = inner.rfind(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("malformed ball '" + std::string(text) + "'");
  b.center = parse_element(strip(inner.substr(0, comma)), field, prec);
  b.radius_val = parse_radius(strip(inner.substr(comma + 1)), field);
  b.closed = (b.kind == Ball::Kind::Disk) == plus;
  return b;
}

// ---------------------------------------------------------------------------
// Divisor

Divisor::Divisor(std::initializer_list<Term> terms) {
  for (const auto& [z, m] : terms) add(z, m);
}

void Divisor::add(const ProjPoint& z, long mult) {
  if (mult == 0) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->first.equals(z)) {
      it->second += mult;
      if (it->second == 0) terms_.erase(it);
      return;
    }
  }
  terms_.emplace_back(z, mult);
}

Divisor& Divisor::operator+=(const Divisor& o) {
  for (const auto& [z, m] : o.terms_) add(z, m);
  return *this;
}

Divisor Divisor::operator-() const {
  Divisor r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

long Divisor::degree() const {
  long d = 0;
  for (const auto& t : terms_) d += t.second;
  return d;
}

bool Divisor::contains_infinity() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.first.is_infinity(); });
}

Divisor Divisor::translated(const Moebius& g) const {
  Divisor r;
  for (const auto& [z, m] : terms_) r.add(g.apply(z), m);
  return r;
}

bool Divisor::support_intersects(const Divisor& o) const {
  for (const auto& t : terms_)
    for (const auto& u : o.terms_)
      if (t.first.equals(u.first)) return true;
  return false;
}

Divisor Divisor::elementary(const ProjPoint& a, const ProjPoint& b) {
  Divisor d;
  d.add(a, 1);
  d.add(b, -1);
  return d;
}

std::string Divisor::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [z, m] : terms_) {
    if (!first) os << (m < 0 ? " - " : " + ");
    else if (m < 0) os << "-";
    first = false;
    long a = m < 0 ? -m : m;
    if (a != 1) os << a << "*";
    os << "(" << z.to_string() << ")";
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// Cross-ratio and pairing

ProjPoint cross_ratio(const ProjPoint& z, const ProjPoint& w, const ProjPoint& a,
                      const ProjPoint& b) {
  const ProjPoint* finite = nullptr;
  for (const auto* q : {&z, &w, &a, &b})
    if (!q->is_infinity() && (!finite || q->value().abs_precision() <
                                             finite->value().abs_precision()))
      finite = q;
  if (!finite) throw UndefinedCrossRatio("cross-ratio of four infinite points");
  const auto& field = finite->value().field();
  const int prec = std::max(finite->value().abs_precision(), 1);

  const bool zw = z.equals(w), ab = a.equals(b);
  const int zeros = int(z.equals(a)) + int(w.equals(b));
  const int poles = int(z.equals(b)) + int(w.equals(a));
  if (zw || ab) {
    if (zeros || poles) throw UndefinedCrossRatio("conflicting coincidence rules");
    return ProjPoint(LocalFieldElement::one(field, prec));
  }
  if ((zeros && poles) || zeros == 2 || poles == 2)
    throw UndefinedCrossRatio("cross-ratio undefined for this coincidence pattern");
  if (zeros) return ProjPoint(LocalFieldElement::zero(field, prec));
  if (poles) return ProjPoint::infinity();

  auto num = LocalFieldElement::one(field, field->max_precision());
  auto den = num;
  auto factor = [&](const ProjPoint& x, const ProjPoint& y, LocalFieldElement& acc) {
    if (x.is_infinity() || y.is_infinity()) return;
    acc *= x.value() - y.value();
  };
  factor(z, a, num);
  factor(w, b, num);
  factor(z, b, den);
  factor(w, a, den);
  return ProjPoint(num / den);
}

LocalFieldElement pair_divisors(const Divisor& D, const Divisor& E) {
  if (D.degree() != 0 || E.degree() != 0)
    throw std::invalid_argument("pairing requires degree-zero divisors");
  const FieldPtr* field = nullptr;
  for (const auto* X : {&D, &E})
    for (const auto& t : X->terms())
      if (!t.first.is_infinity()) field = &t.first.value().field();
  if (!field) throw std::invalid_argument("pairing of divisors without finite points");
  auto num = LocalFieldElement::one(*field, (*field)->max_precision());
  auto den = num;
  for (const auto& [z, m] : D.terms()) {
    for (const auto& [w, n] : E.terms()) {
      if (z.equals(w)) throw SupportCollision("divisor supports intersect");
      if (z.is_infinity() || w.is_infinity()) continue;
      const long k = m * n;
      auto diff = z.value() - w.value();
      if (k > 0) {
        num *= diff.pow(k);
      } else {
        den *= diff.pow(-k);
      }
    }
  }
  return num / den;
}

}  // namespace mumford
