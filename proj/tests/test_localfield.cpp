#include <doctest.h>

#include <random>

#include "mumford/localfield.hpp"
#include "support.hpp"

using namespace mumford;
using mumford::testing::el;

namespace {

mpq_class random_rational(std::mt19937_64& rng, long p) {
  std::uniform_int_distribution<long> num(-5000, 5000), den(1, 999), shift(-4, 4);
  long n = num(rng);
  if (n == 0) n = 1;
  mpq_class q(n, den(rng));
  q.canonicalize();
  const int k = static_cast<int>(shift(rng));
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(k)));
  if (k >= 0) q *= pk;
  else q /= pk;
  return q;
}

long exact_valuation(const mpq_class& q, long p) {
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

}  // namespace

TEST_CASE("valuations of rationals") {
  auto Q3 = FieldDescriptor::qp(3);
  auto Q5 = FieldDescriptor::qp(5);
  CHECK(LocalFieldElement::from_rational(6560, 6561, Q3, 20).valuation() == -8);
  CHECK(LocalFieldElement::from_rational(25, 24, Q5, 20).valuation() == 2);
  CHECK((el("47/24", Q5, 20) - el("3", Q5, 20)).valuation() == 2);
  CHECK(el("4939*3^-2", Q3, 20).valuation() == -2);
  CHECK(el("81", Q3, 20).valuation() == 4);
  CHECK(el("-1", Q3, 20).valuation() == 0);
}

TEST_CASE("fingerprint of 6560/6561") {
  auto Q3 = FieldDescriptor::qp(3);
  auto x = LocalFieldElement::from_rational(6560, 6561, Q3, 20);
  // 6560 = 2 + 2*3 + 2*3^2 + ... + 2*3^7.
  CHECK(x.fingerprint(8) == "v-8:22222222");
}

TEST_CASE("uniformizer of a ramified extension") {
  auto K = FieldDescriptor::eisenstein(3, 1);
  auto pi = LocalFieldElement::uniformizer_power(1, K, 40);
  CHECK(pi.valuation() == 1);
  REQUIRE(pi.valuation_rational().has_value());
  CHECK(*pi.valuation_rational() == mpq_class(1, 2));
  CHECK((pi * pi).equals(LocalFieldElement::from_integer(3, K, 40)));
  CHECK(LocalFieldElement::from_integer(9, K, 40).valuation() == 4);
  CHECK(pi.inverse().valuation() == -1);
}

TEST_CASE("rational c is replaced by an integer") {
  auto K = FieldDescriptor::eisenstein(3, mpq_class(1, 2));
  CHECK(K->eisenstein_c() == 2);
  auto pi = LocalFieldElement::uniformizer_power(1, K, 30);
  CHECK((pi * pi).equals(LocalFieldElement::from_integer(6, K, 30)));
}

TEST_CASE("field operations agree with exact rational arithmetic") {
  std::mt19937_64 rng(7);
  for (long p : {2L, 3L, 5L, 11L}) {
    auto F = FieldDescriptor::qp(p);
    const int N = 40;
    for (int it = 0; it < 200; ++it) {
      mpq_class a = random_rational(rng, p), b = random_rational(rng, p);
      auto A = LocalFieldElement::from_rational(a, F, N);
      auto B = LocalFieldElement::from_rational(b, F, N);
      CHECK(A.valuation() == exact_valuation(a, p));
      CHECK((A * B).equals(LocalFieldElement::from_rational(a * b, F, N)));
      CHECK((A / B).equals(LocalFieldElement::from_rational(a / b, F, N)));
      auto S = A + B;
      mpq_class s = a + b;
      if (s != 0) {
        CHECK(S.equals(LocalFieldElement::from_rational(s, F, N)));
        if (S.valuation()) {
          // Ultrametric inequality.
          CHECK(*S.valuation() >= std::min(*A.valuation(), *B.valuation()));
        }
      }
      CHECK((A - A).is_zero());
    }
  }
}

TEST_CASE("precision tracking") {
  auto Q3 = FieldDescriptor::qp(3);
  auto a = LocalFieldElement::from_rational(1, 3, Q3, 10);
  auto b = LocalFieldElement::from_rational(2, 1, Q3, 20);
  CHECK(a.abs_precision() == 10);
  CHECK((a + b).abs_precision() == 10);
  // Relative precision of a product is the smaller relative precision.
  auto prod = a * b;
  CHECK(prod.rel_precision() == std::min(a.rel_precision(), b.rel_precision()));
  // Cancellation costs digits.
  auto x = el("244", Q3, 20) - el("1", Q3, 20);
  CHECK(x.valuation() == 5);
  CHECK(x.abs_precision() == 20);
  CHECK(x.rel_precision() == 15);
}

TEST_CASE("powers and inverses") {
  std::mt19937_64 rng(11);
  auto F = FieldDescriptor::eisenstein(5, 2);
  for (int it = 0; it < 50; ++it) {
    auto x = LocalFieldElement::from_rational(random_rational(rng, 5), F, 60) +
             LocalFieldElement::uniformizer_power(1, F, 60) *
                 LocalFieldElement::from_rational(random_rational(rng, 5), F, 60);
    if (x.is_zero()) continue;
    CHECK((x * x.inverse()).equals(LocalFieldElement::one(F, 60)));
    CHECK(x.pow(3).equals(x * x * x));
    CHECK(x.pow(-2).equals((x * x).inverse()));
    CHECK(x.pow(0).equals(LocalFieldElement::one(F, 60)));
  }
}

TEST_CASE("errors") {
  auto Q3 = FieldDescriptor::qp(3);
  auto Q5 = FieldDescriptor::qp(5);
  CHECK_THROWS_AS(el("1", Q3, 10) + el("1", Q5, 10), FieldMismatch);
  CHECK_THROWS_AS(el("1", Q3, 10) / LocalFieldElement::zero(Q3, 10), DivisionByZero);
  CHECK_THROWS(parse_rational("1/0", 3));
  CHECK_THROWS(parse_rational("abc", 3));
}

TEST_CASE("parse_rational forms") {
  CHECK(parse_rational("-7", 3) == -7);
  CHECK(parse_rational("3/5", 3) == mpq_class(3, 5));
  CHECK(parse_rational("2*3^-2", 3) == mpq_class(2, 9));
  CHECK(parse_rational("p^3", 5) == 125);
  CHECK(parse_rational("5^6", 5) == 15625);
}

TEST_CASE("to_string shows the expansion") {
  auto Q3 = FieldDescriptor::qp(3);
  CHECK(el("5", Q3, 4).to_string() == "2 + 3 + O(3^4)");
  CHECK(LocalFieldElement::zero(Q3, 6).to_string() == "O(3^6)");
}
