#include "mumford/tate.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mumford {

namespace {

// Unreduced accumulator for sums of products of integrals.
struct Acc {
  mpz_class x, y, yy;

  void clear() {
    x = 0;
    y = 0;
    yy = 0;
  }
  void addmul(const Integral& a, const Integral& b, int e) {
    mpz_addmul(x.get_mpz_t(), a.x.get_mpz_t(), b.x.get_mpz_t());
    if (e == 2) {
      mpz_addmul(yy.get_mpz_t(), a.y.get_mpz_t(), b.y.get_mpz_t());
      mpz_addmul(y.get_mpz_t(), a.x.get_mpz_t(), b.y.get_mpz_t());
      mpz_addmul(y.get_mpz_t(), a.y.get_mpz_t(), b.x.get_mpz_t());
    }
  }
  void add(const Integral& a, int e) {
    x += a.x;
    if (e == 2) y += a.y;
  }
  void sub(const Integral& a, int e) {
    x -= a.x;
    if (e == 2) y -= a.y;
  }
  Integral finish(const FieldDescriptor& f, int N) {
    Integral r;
    r.x = x;
    if (f.e() == 2) {
      r.x += yy * (f.eisenstein_c() * f.prime());
      r.y = y;
    }
    f.reduce(r, N);
    return r;
  }
};

Integral mulmod(const FieldDescriptor& f, const Integral& a, const Integral& b, int N) {
  Integral r = f.mul(a, b);
  f.reduce(r, N);
  return r;
}

int integral_val(const FieldDescriptor& f, const Integral& a, int cap) {
  return f.valuation(a, cap);
}

}  // namespace

TateSeries::TateSeries(FieldPtr field, int prec, std::vector<Integral> coeffs, int tail)
    : field_(std::move(field)), prec_(prec), tail_(tail), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(Integral{});
  for (auto& c : coeffs_) field_->reduce(c, prec_);
}

TateSeries TateSeries::one(const FieldPtr& field, int prec) {
  return TateSeries(field, prec, {Integral{1, 0}}, std::numeric_limits<int>::max() / 4);
}

TateSeries TateSeries::from_elements(const std::vector<LocalFieldElement>& coeffs, int prec) {
  if (coeffs.empty()) throw std::invalid_argument("empty coefficient list");
  const FieldPtr& f = coeffs.front().field();
  int P = prec;
  std::vector<Integral> raw;
  for (const auto& c : coeffs) {
    if (c.valuation() && *c.valuation() < 0)
      throw std::domain_error("coefficient outside the ring of integers");
    P = std::min(P, c.abs_precision());
  }
  for (const auto& c : coeffs) raw.push_back(c.to_integral(P));
  return TateSeries(f, P, std::move(raw), std::numeric_limits<int>::max() / 4);
}

LocalFieldElement TateSeries::coefficient(int k) const {
  if (k < 0 || k > degree()) return LocalFieldElement::zero(field_, error_bound());
  return LocalFieldElement::from_unit(field_, 0, coeffs_[static_cast<size_t>(k)], error_bound());
}

int TateSeries::gauss_val() const {
  int v = error_bound();
  for (const auto& c : coeffs_) v = std::min(v, integral_val(*field_, c, error_bound()));
  return v;
}

int TateSeries::unit_distance_val() const {
  const int cap = error_bound();
  Integral a0 = coeffs_[0];
  a0.x -= 1;
  int v = integral_val(*field_, a0, cap);
  for (size_t k = 1; k < coeffs_.size(); ++k) v = std::min(v, integral_val(*field_, coeffs_[k], cap));
  return v;
}

bool TateSeries::is_unit_normalized() const {
  Integral a0 = coeffs_[0];
  a0.x -= 1;
  return field_->is_zero_mod(a0, error_bound()) && unit_distance_val() > 0;
}

TateSeries TateSeries::truncated(int cap) const {
  if (cap >= degree()) return *this;
  int tail = tail_;
  for (size_t k = static_cast<size_t>(cap) + 1; k < coeffs_.size(); ++k)
    tail = std::min(tail, integral_val(*field_, coeffs_[k], prec_));
  std::vector<Integral> c(coeffs_.begin(), coeffs_.begin() + cap + 1);
  return TateSeries(field_, prec_, std::move(c), tail);
}

TateSeries TateSeries::with_tail(int tail) const {
  TateSeries r = *this;
  r.tail_ = tail;
  return r;
}

TateSeries TateSeries::mul(const TateSeries& o, int cap) const {
  if (!(*field_ == *o.field_)) throw FieldMismatch("series over different fields");
  const int N = std::min(prec_, o.prec_);
  const int e = field_->e();
  const int full = degree() + o.degree();
  const int out = cap < 0 ? full : std::min(cap, full);
  std::vector<Integral> c(static_cast<size_t>(out) + 1);
  Acc acc;
  for (int k = 0; k <= out; ++k) {
    acc.clear();
    const int lo = std::max(0, k - o.degree());
    const int hi = std::min(k, degree());
    for (int i = lo; i <= hi; ++i) acc.addmul(coeffs_[i], o.coeffs_[k - i], e);
    c[k] = acc.finish(*field_, N);
  }
  return TateSeries(field_, N, std::move(c), std::min(tail_, o.tail_));
}

TateSeries TateSeries::scaled(const LocalFieldElement& s) const {
  if (s.valuation() && *s.valuation() < 0) throw std::domain_error("scalar outside the ring of integers");
  const int N = std::min(prec_, s.abs_precision());
  const Integral si = s.to_integral(N);
  std::vector<Integral> c;
  c.reserve(coeffs_.size());
  for (const auto& a : coeffs_) c.push_back(mulmod(*field_, a, si, N));
  return TateSeries(field_, N, std::move(c), tail_);
}

TateSeries TateSeries::mul_linear(const Integral& kappa, int cap) const {
  const int N = prec_;
  std::vector<Integral> c(coeffs_.size() + 1);
  c[0] = coeffs_[0];
  for (size_t k = 1; k <= coeffs_.size(); ++k) {
    Integral t = mulmod(*field_, kappa, coeffs_[k - 1], N);
    c[k] = k < coeffs_.size() ? field_->add(coeffs_[k], t) : t;
    field_->reduce(c[k], N);
  }
  return TateSeries(field_, N, std::move(c), tail_).truncated(cap);
}

TateSeries TateSeries::div_linear(const Integral& kappa, int cap) const {
  const int N = prec_;
  const int vk = integral_val(*field_, kappa, N);
  if (vk < 1) throw std::domain_error("division by a linear factor vanishing on |t| <= 1");
  std::vector<Integral> y(static_cast<size_t>(cap) + 1);
  for (int k = 0; k <= cap; ++k) {
    Integral a = k <= degree() ? coeffs_[k] : Integral{};
    if (k > 0) {
      Integral t = field_->mul(kappa, y[k - 1]);
      a.x -= t.x;
      if (field_->e() == 2) a.y -= t.y;
    }
    field_->reduce(a, N);
    y[k] = std::move(a);
  }
  int tail = std::min(tail_, integral_val(*field_, y[cap], N) + vk);
  for (int k = cap + 1; k <= degree(); ++k) tail = std::min(tail, integral_val(*field_, coeffs_[k], N));
  return TateSeries(field_, N, std::move(y), tail);
}

TateSeries TateSeries::normalized(LocalFieldElement* scalar) const {
  const int N = error_bound();
  if (integral_val(*field_, coeffs_[0], N) != 0)
    throw std::domain_error("constant coefficient is not a unit");
  if (scalar) *scalar = LocalFieldElement::from_unit(field_, 0, coeffs_[0], N);
  const Integral inv = field_->unit_inverse(coeffs_[0], prec_);
  std::vector<Integral> c;
  c.reserve(coeffs_.size());
  for (const auto& a : coeffs_) c.push_back(mulmod(*field_, a, inv, prec_));
  return TateSeries(field_, prec_, std::move(c), tail_);
}

TateSeries TateSeries::derivative() const {
  if (degree() == 0) return TateSeries(field_, prec_, {Integral{}}, tail_);
  std::vector<Integral> c;
  for (int k = 1; k <= degree(); ++k) {
    Integral a = coeffs_[k];
    a.x *= k;
    if (field_->e() == 2) a.y *= k;
    c.push_back(std::move(a));
  }
  return TateSeries(field_, prec_, std::move(c), tail_);
}

LocalFieldElement TateSeries::eval(const LocalFieldElement& t) const {
  if (t.valuation() && *t.valuation() < 0) throw std::domain_error("evaluation point outside |t| <= 1");
  const int P = std::min(error_bound(), t.abs_precision());
  if (P <= 0) return LocalFieldElement::zero(field_, P);
  const Integral ti = t.to_integral(P);
  Integral r = coeffs_.back();
  field_->reduce(r, P);
  for (int k = degree() - 1; k >= 0; --k) {
    r = field_->add(field_->mul(r, ti), coeffs_[k]);
    field_->reduce(r, P);
  }
  return LocalFieldElement::from_unit(field_, 0, r, P);
}

std::string TateSeries::dump() const {
  std::ostringstream os;
  os << "[";
  const int cap = prec_;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) os << ", ";
    const int v = integral_val(*field_, coeffs_[k], cap);
    if (v >= cap) os << "*";
    else os << v;
  }
  os << "] tail>=" << std::min(tail_, prec_);
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

struct UnitMoebius {
  // mu(t) = (alpha t + beta) / (1 + gamma t) with v(gamma) >= 1.
  Integral alpha, beta, gamma;
  int prec;
  int v_gamma;
  int v_lead;  // v(alpha - beta gamma)
};

UnitMoebius unit_moebius(const Moebius& mu, int prec) {
  const auto& d = mu.d();
  if (d.is_zero()) throw std::domain_error("pole of the map lies at t = 0");
  auto alpha = mu.a() / d, beta = mu.b() / d, gamma = mu.c() / d;
  const auto& F = mu.field();
  const int vg = gamma.is_zero() ? std::numeric_limits<int>::max() / 4 : *gamma.valuation();
  if (vg < 1) throw std::domain_error("pole of the map lies in the closed unit ball");
  auto lead = alpha - beta * gamma;
  auto val = [](const LocalFieldElement& x) {
    return x.is_zero() ? std::numeric_limits<int>::max() / 4 : *x.valuation();
  };
  if (val(beta) < 0 || val(lead) < 0) throw std::domain_error("map does not preserve |t| <= 1");
  int P = std::min({prec, alpha.abs_precision(), beta.abs_precision(), gamma.abs_precision()});
  if (P > F->max_precision()) P = F->max_precision();
  return UnitMoebius{alpha.to_integral(P), beta.to_integral(P), gamma.to_integral(P), P, vg,
                     val(lead)};
}

}  // namespace

TateSeries moebius_to_unit_series(const Moebius& mu, int prec, int cap) {
  const UnitMoebius u = unit_moebius(mu, prec);
  const auto& F = mu.field();
  const int N = u.prec;
  std::vector<Integral> c(static_cast<size_t>(cap) + 1);
  c[0] = u.beta;
  if (cap >= 1) {
    Integral lead = F->add(u.alpha, F->neg(F->mul(u.beta, u.gamma)));
    F->reduce(lead, N);
    const Integral ng = F->neg(u.gamma);
    c[1] = lead;
    for (int k = 2; k <= cap; ++k) c[k] = mulmod(*F, c[k - 1], ng, N);
  }
  const long tail = static_cast<long>(u.v_lead) + static_cast<long>(cap) * u.v_gamma;
  return TateSeries(F, N, std::move(c), static_cast<int>(std::min<long>(tail, N)));
}

TateSeries series_compose(const TateSeries& G, const TateSeries& M, int cap) {
  const int N = std::min(G.precision(), M.precision());
  const auto& F = G.field();
  TateSeries R(F, N, {G.raw().back()}, std::min(G.tail_bound(), M.tail_bound()));
  for (int k = G.degree() - 1; k >= 0; --k) {
    R = R.mul(M, cap);
    std::vector<Integral> c = R.raw();
    c[0] = F->add(c[0], G.raw()[k]);
    R = TateSeries(F, N, std::move(c), R.tail_bound());
  }
  return R;
}

MoebiusComposer::MoebiusComposer(const Moebius& mu, int prec, int in_cap, int out_cap)
    : field_(mu.field()), in_cap_(in_cap), out_cap_(out_cap) {
  const UnitMoebius u = unit_moebius(mu, prec);
  prec_ = u.prec;
  series_ = moebius_to_unit_series(mu, prec, out_cap);
  const auto& F = *field_;
  const int e = F.e();
  const size_t width = static_cast<size_t>(out_cap) + 1;
  powers_.resize(static_cast<size_t>(in_cap) + 1);
  powers_[0].assign(width, Integral{});
  powers_[0][0] = Integral{1, 0};
  std::vector<Integral> q(width);
  for (int n = 1; n <= in_cap; ++n) {
    const auto& prev = powers_[n - 1];
    // q = prev * (alpha t + beta)
    for (size_t k = 0; k < width; ++k) {
      Acc acc;
      acc.addmul(prev[k], u.beta, e);
      if (k > 0) acc.addmul(prev[k - 1], u.alpha, e);
      q[k] = acc.finish(F, prec_);
    }
    // divide by (1 + gamma t)
    auto& cur = powers_[n];
    cur.resize(width);
    for (size_t k = 0; k < width; ++k) {
      Integral a = q[k];
      if (k > 0) {
        Integral t = F.mul(u.gamma, cur[k - 1]);
        a.x -= t.x;
        if (e == 2) a.y -= t.y;
      }
      F.reduce(a, prec_);
      cur[k] = std::move(a);
    }
  }
}

TateSeries MoebiusComposer::apply(const TateSeries& G) const {
  const auto& F = *field_;
  const int e = F.e();
  const int N = std::min(prec_, G.precision());
  int tail = G.tail_bound();
  const int top = std::min(G.degree(), in_cap_);
  for (int n = top + 1; n <= G.degree(); ++n) tail = std::min(tail, F.valuation(G.raw()[n], N));
  std::vector<Acc> acc(static_cast<size_t>(out_cap_) + 1);
  for (auto& a : acc) a.clear();
  for (int n = 0; n <= top; ++n) {
    const Integral& g = G.raw()[n];
    if (g.x == 0 && (e == 1 || g.y == 0)) continue;
    const auto& pw = powers_[n];
    for (int k = 0; k <= out_cap_; ++k) acc[k].addmul(g, pw[k], e);
  }
  std::vector<Integral> c(static_cast<size_t>(out_cap_) + 1);
  for (int k = 0; k <= out_cap_; ++k) c[k] = acc[k].finish(F, N);
  return TateSeries(field_, N, std::move(c), tail);
}

}  // namespace mumford
