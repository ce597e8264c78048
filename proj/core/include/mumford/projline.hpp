#pragma once

// The projective line over K: points, Moebius maps, balls and the
// cross-ratio pairing on degree-zero divisors.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mumford/localfield.hpp"

namespace mumford {

class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(LocalFieldElement z) : z_(std::move(z)) {}
  static ProjPoint infinity() { return ProjPoint(); }

  bool is_infinity() const { return !z_.has_value(); }
  const LocalFieldElement& value() const;

  // Infinity equals only infinity; finite points agree modulo the shared
  // precision.
  bool equals(const ProjPoint& o) const;
  std::string to_string() const;

 private:
  std::optional<LocalFieldElement> z_;
};

class BoundaryDegeneracy : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// z -> (a z + b) / (c z + d), up to scalars.
class Moebius {
 public:
  Moebius() = default;
  Moebius(LocalFieldElement a, LocalFieldElement b, LocalFieldElement c, LocalFieldElement d);
  static Moebius identity(const FieldPtr& field, int prec);

  const LocalFieldElement& a() const { return a_; }
  const LocalFieldElement& b() const { return b_; }
  const LocalFieldElement& c() const { return c_; }
  const LocalFieldElement& d() const { return d_; }
  const FieldPtr& field() const { return a_.field(); }

  LocalFieldElement det() const { return a_ * d_ - b_ * c_; }
  LocalFieldElement trace() const { return a_ + d_; }

  ProjPoint apply(const ProjPoint& z) const;
  ProjPoint operator()(const ProjPoint& z) const { return apply(z); }
  LocalFieldElement apply_finite(const LocalFieldElement& z) const;

  // Composition: (g * h)(z) = g(h(z)).
  friend Moebius operator*(const Moebius& g, const Moebius& h);
  Moebius inverse() const;
  // Rescaled so that the smallest entry valuation is zero.
  Moebius normalized() const;
  bool projectively_equals(const Moebius& o) const;

  // g^{-1}(infinity).
  ProjPoint pole() const;
  // g'(P) = det / (cP + d)^2, and g'(infinity) = det / c^2.
  LocalFieldElement derivative(const ProjPoint& P) const;

  // Two eigenvalues of distinct absolute value, i.e. 2 v(tr) < v(det).
  bool is_hyperbolic() const;

  // Lowest absolute precision among the entries.
  int precision() const;
  std::string to_string() const;

 private:
  LocalFieldElement a_, b_, c_, d_;
};

// A ball in P^1(K).  Radii are |pi|^radius_val; radius_val is counted in
// units of v(pi).
//   Disk, open:          B(c, r)          = { v(z - c) >  radius_val }
//   Disk, closed:        B(c, r+)         = { v(z - c) >= radius_val }
//   Complement, open:    P1 - B(c, r+)    = { v(z - c) <  radius_val } + inf
//   Complement, closed:  P1 - B(c, r)     = { v(z - c) <= radius_val } + inf
struct Ball {
  enum class Kind { Disk, Complement };

  Kind kind = Kind::Disk;
  LocalFieldElement center;
  int radius_val = 0;
  bool closed = false;

  static Ball disk(LocalFieldElement c, int radius_val, bool closed = false) {
    return Ball{Kind::Disk, std::move(c), radius_val, closed};
  }
  static Ball complement_of(LocalFieldElement c, int radius_val, bool closed = false) {
    return Ball{Kind::Complement, std::move(c), radius_val, closed};
  }

  bool is_proper() const { return kind == Kind::Disk; }
  bool contains(const ProjPoint& z) const;
  // True when z lies on the boundary sphere { v(z - c) = radius_val }.
  bool on_boundary(const ProjPoint& z) const;
  // B -> B+.
  Ball closure() const;
  // P1 - B.
  Ball complement() const;
  // Equality of the sets of K-points.
  bool same_set(const Ball& o) const;
  // Radius of the closed disk describing the set of K-points (the disk
  // itself, or the removed disk for complements).
  int kpoint_radius() const;

  std::string to_string() const;
};

bool balls_disjoint(const Ball& x, const Ball& y);
// Image of a ball under a Moebius map; complements are handled by passing
// to the complementary disk.
Ball ball_image(const Moebius& g, const Ball& B);

// "B(c, p^-v)", "B(c, p^-v)+", "P1 - B(c, p^-v)", "P1 - B(c, p^-v)+".
Ball parse_ball(std::string_view text, const FieldPtr& field, int prec);

// A divisor with integer multiplicities and pairwise distinct support.
class Divisor {
 public:
  using Term = std::pair<ProjPoint, long>;

  Divisor() = default;
  Divisor(std::initializer_list<Term> terms);

  // Adds mult * (z); merges with an equal support point and drops zero
  // multiplicities.
  void add(const ProjPoint& z, long mult);
  Divisor& operator+=(const Divisor& o);
  friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
  Divisor operator-() const;

  long degree() const;
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  bool contains_infinity() const;
  Divisor translated(const Moebius& g) const;
  bool support_intersects(const Divisor& o) const;

  static Divisor elementary(const ProjPoint& a, const ProjPoint& b);
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

class UndefinedCrossRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SupportCollision : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (z, w; a, b) = (z - a)/(z - b) * (w - b)/(w - a), extended to
// coincidences and infinity.
ProjPoint cross_ratio(const ProjPoint& z, const ProjPoint& w, const ProjPoint& a,
                      const ProjPoint& b);

// Bi-multiplicative extension of the cross-ratio to degree-zero divisors
// with disjoint supports.
LocalFieldElement pair_divisors(const Divisor& D, const Divisor& E);

}  // namespace mumford
