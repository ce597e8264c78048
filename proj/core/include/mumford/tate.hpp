#pragma once

// Power series on the closed unit ball |t| <= 1 with coefficients in O_K,
// known modulo pi^N.  Coefficients past the stored degree are dropped; the
// tail bound records a proven lower bound for their valuations.

#include <string>
#include <vector>

#include "mumford/projline.hpp"

namespace mumford {

class TateSeries {
 public:
  TateSeries() = default;
  TateSeries(FieldPtr field, int prec, std::vector<Integral> coeffs, int tail);
  static TateSeries one(const FieldPtr& field, int prec);
  // Coefficients must have nonnegative valuation.
  static TateSeries from_elements(const std::vector<LocalFieldElement>& coeffs, int prec);

  const FieldPtr& field() const { return field_; }
  int precision() const { return prec_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int tail_bound() const { return tail_; }
  // Valuation bound for the total error: min(precision, tail bound).
  int error_bound() const { return std::min(prec_, tail_); }
  const std::vector<Integral>& raw() const { return coeffs_; }
  LocalFieldElement coefficient(int k) const;

  // Valuation of the Gauss norm, i.e. min v(a_k), capped at error_bound().
  int gauss_val() const;
  // Valuation of ||G - 1||.
  int unit_distance_val() const;
  bool is_unit_normalized() const;

  // Drops coefficients above `cap`; the tail bound takes their valuations
  // into account.
  TateSeries truncated(int cap) const;
  // Replaces the tail bound by one proven by the caller.
  TateSeries with_tail(int tail) const;

  // Full product, or the product truncated at `cap` (the caller vouches for
  // the dropped part through with_tail or the inputs' own tail bounds).
  TateSeries mul(const TateSeries& o, int cap = -1) const;
  TateSeries operator*(const TateSeries& o) const { return mul(o); }
  TateSeries scaled(const LocalFieldElement& s) const;
  // Multiplication by (1 + kappa t)^{+-1} truncated at `cap`; v(kappa) >= 0,
  // and v(kappa) >= 1 for division.
  TateSeries mul_linear(const Integral& kappa, int cap) const;
  TateSeries div_linear(const Integral& kappa, int cap) const;
  // Divides by the constant coefficient, which must be a unit.
  TateSeries normalized(LocalFieldElement* scalar = nullptr) const;

  TateSeries derivative() const;
  LocalFieldElement eval(const LocalFieldElement& t) const;

  // "[v(a0), v(a1), ...] tail>=T"; coefficients that vanish mod pi^N print as "*".
  std::string dump() const;

 private:
  FieldPtr field_;
  int prec_ = 0;
  int tail_ = 0;
  std::vector<Integral> coeffs_;
};

// Expansion of (a t + b)/(c t + d) on |t| <= 1 up to degree cap.  Fails if the
// pole lies in the closed unit ball or the image leaves it.
TateSeries moebius_to_unit_series(const Moebius& mu, int prec, int cap);

// G(M(t)) by Horner's rule in the series ring; M must satisfy ||M|| <= 1.
TateSeries series_compose(const TateSeries& G, const TateSeries& M, int cap);

// Composition with a fixed Moebius map mu, through the precomputed powers
// mu(t)^n, n <= in_cap, each truncated at out_cap.  One application costs
// O(in_cap * out_cap) coefficient operations.
class MoebiusComposer {
 public:
  MoebiusComposer() = default;
  MoebiusComposer(const Moebius& mu, int prec, int in_cap, int out_cap);
  TateSeries apply(const TateSeries& G) const;
  int in_cap() const { return in_cap_; }
  int out_cap() const { return out_cap_; }
  const TateSeries& series() const { return series_; }

 private:
  FieldPtr field_;
  int prec_ = 0;
  int in_cap_ = 0;
  int out_cap_ = 0;
  TateSeries series_;
  // powers_[n] holds the coefficients of mu(t)^n.
  std::vector<std::vector<Integral>> powers_;
};

}  // namespace mumford
