#include "mumford/naive.hpp"

#include <limits>

namespace mumford {

std::uint64_t word_count(int g, int n) {
  if (n < 0) return 0;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1, level = 2ULL * static_cast<std::uint64_t>(g);
  for (int k = 1; k <= n; ++k) {
    if (total > cap - level) return cap;
    total += level;
    if (level > cap / (2ULL * g - 1)) level = cap;
    else level *= 2ULL * g - 1;
  }
  return total;
}

namespace {

// Homogeneous coordinates (x : y) of a point; infinity is (1 : 0).
struct Homog {
  LocalFieldElement x, y;
  bool inf;
  long mult;
};

std::vector<Homog> homogenize(const Divisor& D) {
  std::vector<Homog> out;
  for (const auto& [z, m] : D.terms()) {
    if (z.is_infinity()) out.push_back({{}, {}, true, m});
    else out.push_back({z.value(), {}, false, m});
  }
  return out;
}

const FieldPtr& field_of(const Divisor& D, const Divisor& E) {
  for (const auto* X : {&D, &E})
    for (const auto& t : X->terms())
      if (!t.first.is_infinity()) return t.first.value().field();
  throw std::invalid_argument("divisors without finite points");
}

// Accumulates prod [Z, g W]^{m n}.  Brackets of homogeneous coordinates
// differ from the dehomogenized cross-ratio factors by scalars that cancel
// because both divisors have degree zero.
class BracketProduct {
 public:
  BracketProduct(const Divisor& D, const Divisor& E)
      : field_(field_of(D, E)), d_(homogenize(D)), e_(homogenize(E)) {
    if (D.degree() != 0 || E.degree() != 0)
      throw std::invalid_argument("pairing requires degree-zero divisors");
    num_ = LocalFieldElement::one(field_, field_->max_precision());
    den_ = num_;
  }

  void add(const Moebius& g) {
    for (const auto& w : e_) {
      LocalFieldElement y0, y1;
      if (w.inf) {
        y0 = g.a();
        y1 = g.c();
      } else {
        y0 = g.a() * w.x + g.b();
        y1 = g.c() * w.x + g.d();
      }
      for (const auto& z : d_) {
        LocalFieldElement br = z.inf ? y1 : z.x * y1 - y0;
        if (br.is_zero()) throw SupportCollision("a translate of E meets the support of D");
        const long k = z.mult * w.mult;
        if (k == 1) num_ *= br;
        else if (k == -1) den_ *= br;
        else if (k > 0) num_ *= br.pow(k);
        else den_ *= br.pow(-k);
      }
    }
  }

  LocalFieldElement value() const { return num_ / den_; }

 private:
  FieldPtr field_;
  std::vector<Homog> d_, e_;
  LocalFieldElement num_, den_;
};

}  // namespace

TruncatedTheta theta_naive(const SchottkyGroup& group, const Divisor& D, const Divisor& E, int n,
                           std::uint64_t budget) {
  const std::uint64_t need = word_count(group.genus(), n);
  if (budget != 0 && need > budget)
    throw BudgetExceeded("naive product needs " + std::to_string(need) + " words at n = " +
                         std::to_string(n) + ", budget is " + std::to_string(budget));
  BracketProduct acc(D, E);
  std::uint64_t words = 0;
  for (int len = 0; len <= n; ++len) {
    for_each_word(group, len, [&](const ReducedWord& w) {
      acc.add(w.matrix);
      ++words;
    });
  }
  return TruncatedTheta{acc.value(), n, words};
}

TruncatedTheta theta_naive_auto(const SchottkyGroup& group, const Divisor& D, const Divisor& E,
                                int m_digits, const BoundsData& bounds, std::uint64_t budget) {
  return theta_naive(group, D, E, nu(m_digits, D, bounds), budget);
}

LocalFieldElement theta_over(const Divisor& D, const Divisor& E,
                             const std::vector<Moebius>& elements) {
  BracketProduct acc(D, E);
  for (const auto& g : elements) acc.add(g);
  return acc.value();
}

LocalFieldElement theta_discontinuous(const SchottkyGroup& group, const Divisor& D,
                                      const Divisor& E, const std::vector<Moebius>& cosets,
                                      int n, std::uint64_t budget) {
  if (cosets.empty()) throw std::invalid_argument("no coset representatives");
  LocalFieldElement out;
  for (const auto& g : cosets) {
    auto v = theta_naive(group, D, E.translated(g), n, budget).value;
    out = out.valid() ? out * v : v;
  }
  return out;
}

}  // namespace mumford
