#pragma once

// Theta products by direct enumeration of reduced words.  Exponential in the
// truncation length; this is the reference the fast algorithm is checked
// against.

#include <cstdint>
#include <vector>

#include "mumford/bounds.hpp"

namespace mumford {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TruncatedTheta {
  LocalFieldElement value;
  int n = 0;
  std::uint64_t words = 0;
};

constexpr std::uint64_t kDefaultWordBudget = 10'000'000;

// |Gamma_{<=n}| for a free group of rank g, saturating at UINT64_MAX.
std::uint64_t word_count(int g, int n);

// Product of (D, gamma E) over all reduced words of length <= n.
// budget == 0 disables the word budget.
TruncatedTheta theta_naive(const SchottkyGroup& group, const Divisor& D, const Divisor& E, int n,
                           std::uint64_t budget = kDefaultWordBudget);
// Same with n = nu(m, D).
TruncatedTheta theta_naive_auto(const SchottkyGroup& group, const Divisor& D, const Divisor& E,
                                int m_digits, const BoundsData& bounds,
                                std::uint64_t budget = kDefaultWordBudget);
// Product of (D, gamma E) over an explicit list of group elements.
LocalFieldElement theta_over(const Divisor& D, const Divisor& E,
                             const std::vector<Moebius>& elements);
// (D, E)_G = prod_k (D, g_k E)_{Gamma, <= n} for coset representatives g_k
// of G / Gamma.
LocalFieldElement theta_discontinuous(const SchottkyGroup& group, const Divisor& D,
                                      const Divisor& E, const std::vector<Moebius>& cosets,
                                      int n, std::uint64_t budget = kDefaultWordBudget);

}  // namespace mumford
