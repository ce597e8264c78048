#include <doctest.h>

#include <random>

#include "mumford/tate.hpp"
#include "support.hpp"

using namespace mumford;
using mumford::testing::el;

namespace {

constexpr int N = 30;

TateSeries series(const FieldPtr& F, std::initializer_list<const char*> coeffs) {
  std::vector<LocalFieldElement> v;
  for (const char* c : coeffs) v.push_back(el(c, F, N));
  return TateSeries::from_elements(v, N);
}

TateSeries random_series(std::mt19937_64& rng, const FieldPtr& F, int degree) {
  std::uniform_int_distribution<long> d(-500, 500);
  std::vector<LocalFieldElement> v;
  for (int k = 0; k <= degree; ++k) v.push_back(LocalFieldElement::from_integer(d(rng), F, N));
  return TateSeries::from_elements(v, N);
}

bool same(const TateSeries& a, const TateSeries& b) {
  const int top = std::max(a.degree(), b.degree());
  auto zero = LocalFieldElement::zero(a.field(), N);
  for (int k = 0; k <= top; ++k) {
    auto x = k <= a.degree() ? a.coefficient(k) : zero;
    auto y = k <= b.degree() ? b.coefficient(k) : zero;
    if (!x.equals(y)) return false;
  }
  return true;
}

TateSeries plus(const TateSeries& a, const TateSeries& b) {
  const int top = std::max(a.degree(), b.degree());
  auto zero = LocalFieldElement::zero(a.field(), N);
  std::vector<LocalFieldElement> v;
  for (int k = 0; k <= top; ++k)
    v.push_back((k <= a.degree() ? a.coefficient(k) : zero) +
                (k <= b.degree() ? b.coefficient(k) : zero));
  return TateSeries::from_elements(v, N);
}

Moebius moebius(const FieldPtr& F, const char* a, const char* b, const char* c, const char* d) {
  return Moebius(el(a, F, N), el(b, F, N), el(c, F, N), el(d, F, N));
}

}  // namespace

TEST_CASE("products") {
  auto F = FieldDescriptor::qp(3);
  auto prod = series(F, {"1", "3"}) * series(F, {"1", "-3"});
  CHECK(same(prod, series(F, {"1", "0", "-9"})));
  CHECK(prod.unit_distance_val() == 2);
  CHECK(prod.is_unit_normalized());
  CHECK(series(F, {"3", "9"}).gauss_val() == 1);
  // Truncated product keeps the low coefficients.
  auto cut = series(F, {"1", "1", "1"}).mul(series(F, {"1", "1"}), 1);
  CHECK(cut.degree() == 1);
  CHECK(same(cut, series(F, {"1", "2"})));
}

TEST_CASE("expansion of t / (3t + 1)") {
  auto F = FieldDescriptor::qp(3);
  auto s = moebius_to_unit_series(moebius(F, "1", "0", "3", "1"), N, 40);
  CHECK(s.coefficient(0).is_zero());
  // t / (1 + 3t) = sum (-3)^k t^{k+1}.
  auto power = LocalFieldElement::one(F, N);
  for (int k = 0; k < 20; ++k) {
    CHECK(s.coefficient(k + 1).equals(power));
    power *= el("-3", F, N);
  }
  // The pole -1/3 is outside the unit ball; 1/(t - 3) has its pole inside.
  CHECK_THROWS(moebius_to_unit_series(moebius(F, "0", "1", "1", "-3"), N, 10));
}

TEST_CASE("composition identities") {
  std::mt19937_64 rng(1);
  auto F = FieldDescriptor::qp(5);
  auto id = moebius(F, "1", "0", "0", "1");
  auto t = moebius_to_unit_series(id, N, 8);
  for (int it = 0; it < 10; ++it) {
    auto G = random_series(rng, F, 6);
    CHECK(same(series_compose(G, t, 8), G));
    CHECK(same(MoebiusComposer(id, N, 6, 8).apply(G), G));
  }
}

TEST_CASE("composer agrees with Horner composition") {
  std::mt19937_64 rng(2);
  auto F = FieldDescriptor::qp(3);
  auto mu = moebius(F, "2", "3", "9", "1");
  const int cap = 30;
  auto M = moebius_to_unit_series(mu, N, cap);
  MoebiusComposer C(mu, N, 8, cap);
  for (int it = 0; it < 10; ++it) {
    auto G = random_series(rng, F, 8);
    auto a = C.apply(G), b = series_compose(G, M, cap);
    CHECK(same(a, b));
  }
}

TEST_CASE("composition is associative on polynomials") {
  std::mt19937_64 rng(3);
  auto F = FieldDescriptor::qp(7);
  for (int it = 0; it < 10; ++it) {
    auto G = random_series(rng, F, 3);
    auto M1 = random_series(rng, F, 2);
    auto M2 = random_series(rng, F, 2);
    // Exact: every product stays below the cap.
    auto lhs = series_compose(series_compose(G, M1, 20), M2, 20);
    auto rhs = series_compose(G, series_compose(M1, M2, 20), 20);
    CHECK(same(lhs, rhs));
  }
}

TEST_CASE("derivative") {
  std::mt19937_64 rng(4);
  auto F = FieldDescriptor::qp(3);
  CHECK(same(series(F, {"5", "1", "2", "1"}).derivative(), series(F, {"1", "4", "3"})));
  for (int it = 0; it < 10; ++it) {
    auto G = random_series(rng, F, 5), H = random_series(rng, F, 4);
    CHECK(same((G * H).derivative(), plus(G.derivative() * H, G * H.derivative())));
  }
}

TEST_CASE("finite differences match the derivative") {
  std::mt19937_64 rng(5);
  auto F = FieldDescriptor::qp(3);
  auto mu = moebius(F, "1", "3", "3", "1");
  auto G = moebius_to_unit_series(mu, N, 40);
  auto dG = G.derivative();
  for (int it = 0; it < 10; ++it) {
    auto t = LocalFieldElement::from_integer(static_cast<long>(rng() % 1000), F, N);
    for (int s : {5, 8}) {
      auto h = LocalFieldElement::uniformizer_power(s, F, N);
      auto fd = (G.eval(t + h) - G.eval(t)) / h;
      CHECK((fd - dG.eval(t)).valuation_or_precision() >= s);
    }
    // The series evaluates to the map itself.
    CHECK(G.eval(t).equals(mu.apply_finite(t)));
  }
}

TEST_CASE("linear factors") {
  std::mt19937_64 rng(6);
  auto F = FieldDescriptor::eisenstein(3, 1);
  auto pi = LocalFieldElement::uniformizer_power(1, F, N);
  auto kappa = (pi * el("2", F, N)).to_integral(N);
  for (int it = 0; it < 5; ++it) {
    auto G = random_series(rng, F, 4);
    auto up = G.mul_linear(kappa, 40);
    CHECK(same(up, G * TateSeries::from_elements({el("1", F, N), pi * el("2", F, N)}, N)));
    auto back = up.div_linear(kappa, 40);
    CHECK(same(back.truncated(4), G));
  }
}

TEST_CASE("normalization") {
  auto F = FieldDescriptor::qp(5);
  auto G = series(F, {"2", "5", "25"});
  LocalFieldElement s;
  auto U = G.normalized(&s);
  CHECK(s.valid());
  CHECK(U.coefficient(0).equals(el("1", F, N)));
  CHECK(same(U.scaled(el("2", F, N)), G));
  CHECK(U.unit_distance_val() == 1);
  CHECK_THROWS(series(F, {"5", "1"}).normalized());
}

TEST_CASE("truncation records a tail bound") {
  auto F = FieldDescriptor::qp(3);
  auto G = series(F, {"1", "3", "9", "27"});
  auto T = G.truncated(1);
  CHECK(T.degree() == 1);
  CHECK(T.tail_bound() == 2);
  CHECK(T.error_bound() == 2);
  CHECK(T.with_tail(25).tail_bound() == 25);
}
