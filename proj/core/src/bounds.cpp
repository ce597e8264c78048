#include "mumford/bounds.hpp"

#include <algorithm>
#include <limits>

namespace mumford {

int compute_n_gamma(const SchottkyGroup& group, int max_n) {
  for (int n = 1; n <= max_n; ++n) {
    bool proper = true;
    for_each_word(group, n, [&](const ReducedWord& w) {
      if (proper && gamma_ball(group, w).ball.kind == Ball::Kind::Complement) proper = false;
    });
    if (proper) return n;
  }
  throw std::runtime_error("n(Gamma) exceeds " + std::to_string(max_n) +
                           "; is infinity in the fundamental domain?");
}

BoundsData compute_rho_C(const SchottkyGroup& group, int n) {
  BoundsData b;
  b.e = group.field()->e();
  b.n_gamma = n;
  for_each_word(group, n, [&](const ReducedWord& w) { b.table.push_back(gamma_ball(group, w)); });

  int rho = std::numeric_limits<int>::max();
  int rmin = std::numeric_limits<int>::max();
  for (const auto& entry : b.table) {
    rmin = std::min(rmin, entry.radius_val);
    for (int i : group.indices()) {
      if (i == -entry.word.head()) continue;
      Ball longer = ball_image(group.gen(i), entry.ball);
      if (longer.kind != Ball::Kind::Disk || entry.ball.kind != Ball::Kind::Disk)
        throw std::runtime_error("B(gamma) is not proper at length n(Gamma)");
      rho = std::min(rho, longer.radius_val - entry.radius_val);
    }
  }
  if (rho <= 0) throw BoundsUnavailable("radius contraction rho is not below 1");
  b.rho_val = rho;
  b.C_val = rmin - n * rho;
  return b;
}

BoundsData compute_bounds(const SchottkyGroup& group) {
  return compute_rho_C(group, compute_n_gamma(group));
}

int delta_of_point(const ProjPoint& z, const BoundsData& b) {
  if (z.is_infinity()) return 0;
  int best = std::numeric_limits<int>::min();
  for (const auto& entry : b.table) {
    auto v = (z.value() - entry.center).valuation();
    if (!v) throw PrecisionError("point coincides with a ball center at this precision");
    best = std::max(best, *v);
  }
  return -best;
}

int delta_of_divisor(const Divisor& D, const BoundsData& b) {
  int out = std::numeric_limits<int>::max();
  for (const auto& t : D.terms()) out = std::min(out, delta_of_point(t.first, b));
  return out == std::numeric_limits<int>::max() ? 0 : out;
}

std::optional<int> diameter(const Divisor& D) {
  std::optional<int> out;
  const auto& T = D.terms();
  for (size_t a = 0; a < T.size(); ++a) {
    for (size_t c = a + 1; c < T.size(); ++c) {
      if (T[a].first.is_infinity() || T[c].first.is_infinity()) continue;
      auto v = (T[a].first.value() - T[c].first.value()).valuation();
      if (!v) throw SupportCollision("support points coincide at this precision");
      out = out ? std::min(*out, *v) : *v;
    }
  }
  return out;
}

int worst_delta_on_domain(const SchottkyGroup& group) {
  int r = std::numeric_limits<int>::min();
  for (int i : group.indices()) r = std::max(r, group.ball(i).radius_val);
  return std::min(0, -r);
}

int factor_bound(const BoundsData& b, std::optional<int> diameter_val, int delta_val, int len) {
  return b.C_val + diameter_val.value_or(0) + 2 * delta_val + len * b.rho_val;
}

int nu_from_data(int m_digits, const BoundsData& b, std::optional<int> diameter_val,
                 int delta_val) {
  const long num = static_cast<long>(m_digits) * b.e - b.C_val - diameter_val.value_or(0) -
                   2L * delta_val;
  long k = num <= 0 ? 0 : (num + b.rho_val - 1) / b.rho_val;
  return static_cast<int>(std::max<long>({2, b.n_gamma, k}));
}

int nu(int m_digits, const Divisor& D, const BoundsData& b) {
  return nu_from_data(m_digits, b, diameter(D), delta_of_divisor(D, b));
}

}  // namespace mumford
