#include <doctest.h>

#include <random>

#include "mumford/bench.hpp"
#include "mumford/fast.hpp"
#include "mumford/naive.hpp"
#include "support.hpp"

using namespace mumford;
using mumford::testing::agreement;
using mumford::testing::el;
using mumford::testing::fixture_text;
using mumford::testing::load_fixture;
using mumford::testing::pt;

namespace {

LoadedEngine engine_for(const std::string& name, int m, FastOptions opt = {}) {
  return engine_from_json(fixture_text(name), m, opt);
}

// min over coefficients of v(a_k - b_k).
int series_distance(const TateSeries& a, const TateSeries& b) {
  const int top = std::max(a.degree(), b.degree());
  int out = std::min(a.error_bound(), b.error_bound());
  for (int k = 0; k <= top; ++k) {
    if (k > a.degree() || k > b.degree()) {
      const auto& c = k > a.degree() ? b : a;
      out = std::min(out, c.coefficient(k).valuation_or_precision());
      continue;
    }
    out = std::min(out, (a.coefficient(k) - b.coefficient(k)).valuation_or_precision());
  }
  return out;
}

Divisor divisor(const FieldPtr& F, int prec, std::initializer_list<std::pair<const char*, long>> t) {
  Divisor D;
  for (const auto& [s, m] : t) D.add(pt(s, F, prec), m);
  return D;
}

}  // namespace

TEST_CASE("frames send the ball centers to 0, 1 and infinity") {
  for (const char* name : {"q3_mr", "q3_eisenstein", "q11_genus3", "q5_domain_c"}) {
    std::string fixture_name = name;
    CAPTURE(fixture_name);
    auto L = engine_for(name, 10);
    const auto& E = L.engine;
    const auto& G = E.group();
    for (int i : G.indices()) {
      const Frame& fr = E.frame(i);
      CHECK(fr.tau(ProjPoint(G.ball(-i).center)).value().is_zero());
      CHECK(fr.tau(ProjPoint(fr.varpi)).value().equals(LocalFieldElement::one(G.field(), 40)));
      CHECK(fr.tau(ProjPoint(G.ball(i).center)).is_infinity());
      CHECK(G.ball(i).on_boundary(ProjPoint(fr.varpi)));
      CHECK(fr.t_inf.valuation_or_precision() > 0);
      CHECK(fr.decay > 0);
      CHECK(fr.degree_cap >= 1);
      // The transition maps keep the unit disk.
      for (int j : G.indices()) {
        if (j == -i) continue;
        CHECK(E.transition(i, j).series().gauss_val() >= 0);
      }
    }
  }
}

TEST_CASE("matches the naive product at small truncation") {
  std::mt19937_64 rng(31);
  const int m = 12;
  for (const char* name : {"q3_mr", "q3_eisenstein", "q11_genus3"}) {
    std::string fixture_name = name;
    CAPTURE(fixture_name);
    for (int n : {2, 3}) {
      FastOptions opt;
      opt.nu = n;
      auto L = engine_for(name, m, opt);
      auto naive = load_fixture(name, naive_digits(m, n));
      for (int trial = 0; trial < 3; ++trial) {
        auto [D, E] = random_divisor_pair(naive.group, rng);
        auto fast = theta_pair(L.engine, D, E);
        auto slow = theta_naive(naive.group, D, E, n).value;
        CHECK(agreement(fast, slow) >= m * naive.field->e());
      }
    }
  }
}

TEST_CASE("matches the naive product at the certified truncation") {
  std::mt19937_64 rng(32);
  const int m = 8;
  auto L = engine_for("q3_mr", m);
  for (int trial = 0; trial < 4; ++trial) {
    auto naive = load_fixture("q3_mr", naive_digits(m, L.engine.nu()));
    auto [D, E] = random_divisor_pair(naive.group, rng);
    int used = 0;
    auto fast = theta_pair(L.engine, D, E, &used);
    CHECK(used == L.engine.nu());
    auto slow = theta_naive(naive.group, D, E, used).value;
    CHECK(agreement(fast, slow) >= m);
  }
}

TEST_CASE("the certified truncation length") {
  auto L = engine_for("q3_mr", 10);
  CHECK(L.engine.nu() == 7);
  CHECK(!L.engine.adaptive());
  CHECK(L.engine.precision() == 20);
}

TEST_CASE("norm contraction along the recursion") {
  FastOptions opt;
  opt.record_history = true;
  const int m = 10;
  auto L = engine_for("q3_mr", m, opt);
  std::mt19937_64 rng(33);
  auto E = random_divisor_pair(L.engine.group(), rng).second;
  auto TS = L.engine.theta_series(E);
  REQUIRE(TS.history.size() == static_cast<size_t>(TS.nu - 1));
  for (size_t s = 0; s < TS.history[0].size(); ++s) {
    for (size_t k = 1; k < TS.history.size(); ++k)
      CHECK(TS.history[k][s] >= TS.history[k - 1][s]);
    CHECK(TS.history.back()[s] >= m);
  }
}

TEST_CASE("a perturbation of size p^-s moves the next step by at most p^-s") {
  const int m = 12;
  auto L = engine_for("q3_mr", m);
  const auto& eng = L.engine;
  const auto& G = eng.group();
  std::mt19937_64 rng(34);
  auto E = random_divisor_pair(G, rng).second;
  auto S = eng.init_series(E);
  for (int s : {3, 6, 9}) {
    auto kappa = LocalFieldElement::uniformizer_power(s, G.field(), eng.precision())
                     .to_integral(eng.precision());
    SeriesTuple P = S;
    for (int i : G.indices()) {
      const size_t k = SchottkyGroup::slot(i);
      P[k] = S[k].mul_linear(kappa, eng.frame(i).degree_cap);
    }
    auto a = eng.nabla(S), b = eng.nabla(P);
    for (size_t k = 0; k < a.size(); ++k) CHECK(series_distance(a[k], b[k]) >= s);
  }
}

TEST_CASE("trivial divisors pair to one") {
  auto L = engine_for("q3_mr", 10);
  const auto& F = L.engine.group().field();
  Divisor E = divisor(F, 40, {{"5", 1}, {"5", -1}});
  CHECK(E.empty());
  Divisor D = divisor(F, 40, {{"1/3", 1}, {"7", -1}});
  CHECK(theta_pair(L.engine, D, E).equals(LocalFieldElement::one(F, 40)));
}

TEST_CASE("symmetry and bi-multiplicativity") {
  const int m = 15;
  auto L = engine_for("q3_mr", m);
  const auto& F = L.engine.group().field();
  auto D1 = divisor(F, 60, {{"1/3", 1}, {"7", -1}});
  auto D2 = divisor(F, 60, {{"16", 1}, {"2/9", -1}});
  auto E = divisor(F, 60, {{"3", 1}, {"inf", -1}});
  auto de = theta_pair(L.engine, D1, E);
  CHECK(agreement(de, theta_pair(L.engine, E, D1)) >= m);
  CHECK(agreement(theta_pair(L.engine, D1 + D2, E), de * theta_pair(L.engine, D2, E)) >= m);
  CHECK(agreement(theta_pair(L.engine, D2, D1 + E),
                  theta_pair(L.engine, D2, D1) * theta_pair(L.engine, D2, E)) >= m);
  // Translating one argument by the group changes nothing.
  auto g = L.engine.group().gen(2);
  CHECK(agreement(theta_pair(L.engine, D1.translated(g), E), de) >= m);
}

TEST_CASE("conjugation invariance") {
  const int m = 10;
  auto L = engine_for("q3_generators_a", m);
  CHECK(L.engine.moved());
  const auto& F = L.file.field;
  auto D = divisor(F, 80, {{"1/3", 1}, {"5", -1}});
  auto E = divisor(F, 80, {{"7/9", 1}, {"2", -1}});
  auto base = theta_pair(L.engine, D, E);

  // Explicit normal form, divisors moved by h^-1.
  auto N = normalize_infinity(L.file.group);
  const Moebius hinv = N.conjugation()->inverse();
  FastEngine direct(N, m);
  CHECK(!direct.moved());
  CHECK(agreement(theta_pair(direct, D.translated(hinv), E.translated(hinv)), base) >= m);

  // A translation z -> z + 1 of the normal form.
  const int prec = N.precision();
  Moebius t(el("1", F, prec), el("1", F, prec), el("0", F, prec), el("1", F, prec));
  std::vector<Moebius> gens;
  std::vector<std::pair<int, Ball>> balls;
  for (int i = 1; i <= N.genus(); ++i) gens.push_back(t.inverse() * N.gen(i) * t);
  for (int i : N.indices()) balls.emplace_back(i, ball_image(t.inverse(), N.ball(i)));
  SchottkyGroup shifted(F, prec, gens, balls);
  FastEngine moved(shifted, m);
  auto tinv = t.inverse();
  CHECK(agreement(theta_pair(moved, D.translated(hinv).translated(tinv),
                             E.translated(hinv).translated(tinv)),
                  base) >= m);
}

TEST_CASE("both generator sets of the same group agree") {
  // The second set has no radius contraction certificate, so its engine
  // runs with the adaptive stop.
  const int m = 10;
  auto A = engine_for("q3_generators_a", m);
  auto B = engine_for("q3_generators_b", m);
  CHECK(!A.engine.adaptive());
  CHECK(B.engine.adaptive());
  const auto& F = A.file.field;
  auto D = divisor(F, 80, {{"1/3", 1}, {"5", -1}});
  auto E = divisor(F, 80, {{"7/9", 1}, {"2", -1}});
  CHECK(agreement(theta_pair(A.engine, D, E), theta_pair(B.engine, D, E)) >= m);
}

TEST_CASE("both fundamental domains of the Q5 group agree") {
  const int m = 10;
  auto B = engine_for("q5_domain_b", m);
  auto C = engine_for("q5_domain_c", m);
  const auto& F = B.file.field;
  auto D = divisor(F, 80, {{"1/5", 1}, {"7", -1}});
  auto E = divisor(F, 80, {{"11/25", 1}, {"4", -1}});
  CHECK(agreement(theta_pair(B.engine, D, E), theta_pair(C.engine, D, E)) >= m);
}

TEST_CASE("period matrix") {
  const int m = 8;
  auto L = engine_for("q3_mr", m);
  auto P = period_matrix(L.engine);
  REQUIRE(P.Q.size() == 2);
  CHECK(agreement(P.Q[0][1], P.Q[1][0]) >= m);
  const auto& F = L.file.field;
  auto P2 = period_matrix(L.engine, pt("1/3", F, 40), pt("2/9", F, 40));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(agreement(P.Q[i][j], P2.Q[i][j]) >= m);
  // Naive product over the same pairs.
  const auto& G = L.engine.group();
  auto b = *L.engine.bounds();
  auto z0 = P.z0, z1 = P.z1;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      auto D = Divisor::elementary(G.gen(i)(z0), z0);
      auto E = Divisor::elementary(G.gen(j)(z1), z1);
      const int n = nu(m, D, b) + 1;
      auto naive = load_fixture("q3_mr", naive_digits(m, n));
      auto Dn = Divisor::elementary(naive.group.gen(i)(z0), z0);
      auto En = Divisor::elementary(naive.group.gen(j)(z1), z1);
      auto slow = theta_naive(naive.group, Dn, En, n).value;
      CHECK(agreement(P.Q[i - 1][j - 1], slow) >= m);
    }
  }
  // Off-diagonal entries are units, diagonal entries have positive valuation.
  CHECK(P.Q[0][1].valuation() == 0);
  CHECK(P.Q[0][0].valuation_or_precision() > 0);
}

TEST_CASE("dlog matches a difference quotient") {
  const int m = 16;
  auto L = engine_for("q3_mr", m);
  const auto& G = L.engine.group();
  const auto& F = G.field();
  auto pts = L.engine.domain_points(6);
  auto word = make_word(G, {1});
  auto base = pts[0];
  auto E = Divisor::elementary(G.gen(1)(base), base);
  auto h = LocalFieldElement::uniformizer_power(m / 2, F, 60);
  for (size_t k = 1; k < pts.size(); ++k) {
    const auto& z = pts[k].value();
    auto dl = u_gamma_dlog(L.engine, word, pts[k], base);
    auto ratio = theta_pair(L.engine, Divisor::elementary(ProjPoint(z + h), pts[k]), E);
    auto fd = (ratio - LocalFieldElement::one(F, 60)) / h;
    CHECK((fd - dl).valuation_or_precision() >= m / 2 - 2);
  }
}

TEST_CASE("canonical embedding is not constant") {
  auto L = engine_for("q11_genus3", 10);
  auto pts = L.engine.domain_points(3);
  auto a = canonical_embedding(L.engine, pts[1]);
  auto b = canonical_embedding(L.engine, pts[2]);
  REQUIRE(a.size() == 3);
  // Compare projective points through a cross product.
  bool differ = false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) differ = differ || !(a[i] * b[j] - a[j] * b[i]).is_zero();
  CHECK(differ);
}

TEST_CASE("parallel and serial recursion agree") {
  FastOptions par;
  par.parallel = true;
  auto A = engine_for("q11_genus3", 10);
  auto B = engine_for("q11_genus3", 10, par);
  const auto& F = A.file.field;
  auto D = divisor(F, 40, {{"1/11", 1}, {"7", -1}});
  auto E = divisor(F, 40, {{"9", 1}, {"inf", -1}});
  CHECK(theta_pair(A.engine, D, E).equals(theta_pair(B.engine, D, E)));
}

TEST_CASE("divisors on both sides of infinity") {
  auto L = engine_for("q3_mr", 10);
  const auto& F = L.file.field;
  auto D = divisor(F, 40, {{"inf", 1}, {"7", -1}});
  auto E = divisor(F, 40, {{"1/3", 1}, {"inf", -1}});
  CHECK_THROWS_AS(theta_pair(L.engine, D, E), SupportCollision);
  auto bad = divisor(F, 40, {{"7", 1}});
  CHECK_THROWS_AS(theta_pair(L.engine, bad, E), std::invalid_argument);
}
