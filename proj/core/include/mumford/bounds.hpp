#pragma once

// Convergence data for truncated theta products.  Everything is kept as an
// exact valuation in units of v(pi): rho = |pi|^rho_val, C = |pi|^C_val, and
// so on.  Divide by e for p-adic valuations.

#include <optional>
#include <vector>

#include "mumford/schottky.hpp"

namespace mumford {

// The radius ratios at length n(Gamma) do not all lie below 1, so rho and C
// give no certificate for this set of generators.
class BoundsUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundsData {
  int e = 1;
  int n_gamma = 1;
  int rho_val = 0;
  int C_val = 0;
  // B(gamma) for gamma in Gamma_{n_gamma}.
  std::vector<BallOrbitEntry> table;

  mpq_class rho_padic() const { return mpq_class(rho_val, e); }
  mpq_class C_padic() const { return mpq_class(C_val, e); }
};

// Least n >= 1 such that no B(gamma)+ with gamma of length n contains infinity.
int compute_n_gamma(const SchottkyGroup& group, int max_n = 32);
BoundsData compute_rho_C(const SchottkyGroup& group, int n);
BoundsData compute_bounds(const SchottkyGroup& group);

// v(delta(z)) = -max v(z - c(gamma)); delta(inf) has valuation 0.
int delta_of_point(const ProjPoint& z, const BoundsData& b);
int delta_of_divisor(const Divisor& D, const BoundsData& b);
// v(R_D) = min v(z - w) over pairs of distinct finite support points, or
// nullopt when D has fewer than two finite points.
std::optional<int> diameter(const Divisor& D);
// Valuation of delta that is valid for every point of F+ at once.
int worst_delta_on_domain(const SchottkyGroup& group);

// Exponent lower bound v_C + v_R + 2 v_delta + len * v_rho for a single
// factor (D, gamma E) - 1.
int factor_bound(const BoundsData& b, std::optional<int> diameter_val, int delta_val, int len);

// Truncation length for m p-adic digits.
int nu_from_data(int m_digits, const BoundsData& b, std::optional<int> diameter_val,
                 int delta_val);
int nu(int m_digits, const Divisor& D, const BoundsData& b);

}  // namespace mumford
