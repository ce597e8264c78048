#include "mumford/schottky.hpp"

#include <algorithm>
#include <sstream>

namespace mumford {

std::string ReducedWord::to_string() const {
  if (letters.empty()) return "1";
  std::ostringstream os;
  for (size_t k = 0; k < letters.size(); ++k) {
    if (k) os << "*";
    os << "g" << std::abs(letters[k]);
    if (letters[k] < 0) os << "^-1";
  }
  return os.str();
}

SchottkyGroup::SchottkyGroup(FieldPtr field, int precision, std::vector<Moebius> generators,
                             std::vector<std::pair<int, Ball>> balls)
    : field_(std::move(field)), precision_(precision), gens_(std::move(generators)) {
  const int g = genus();
  if (g < 1) throw std::invalid_argument("a Schottky group needs at least one generator");
  if (static_cast<int>(balls.size()) != 2 * g)
    throw std::invalid_argument("expected " + std::to_string(2 * g) + " balls");
  mats_.resize(2 * g);
  balls_.resize(2 * g);
  std::vector<bool> seen(2 * g, false);
  for (auto& [i, B] : balls) {
    if (i == 0 || std::abs(i) > g)
      throw std::invalid_argument("ball index out of range: " + std::to_string(i));
    if (seen[slot(i)]) throw std::invalid_argument("duplicate ball index " + std::to_string(i));
    seen[slot(i)] = true;
    balls_[slot(i)] = std::move(B);
  }
  for (int k = 1; k <= g; ++k) {
    const Moebius& m = gens_[k - 1];
    if (!m.det().valuation()) throw std::invalid_argument("singular generator");
    mats_[slot(k)] = m.normalized();
    mats_[slot(-k)] = m.inverse().normalized();
    indices_.push_back(k);
    indices_.push_back(-k);
  }
}

bool SchottkyGroup::in_closed_domain(const ProjPoint& z) const {
  return std::none_of(balls_.begin(), balls_.end(),
                      [&](const Ball& B) { return B.contains(z); });
}

bool SchottkyGroup::in_open_domain(const ProjPoint& z) const {
  return std::none_of(balls_.begin(), balls_.end(),
                      [&](const Ball& B) { return B.closure().contains(z); });
}

bool SchottkyGroup::is_normalized() const {
  return std::all_of(balls_.begin(), balls_.end(),
                     [](const Ball& B) { return B.kind == Ball::Kind::Disk; });
}

std::string SchottkyGroup::to_string() const {
  std::ostringstream os;
  os << "genus " << genus() << " over Q_" << field_->prime();
  if (field_->e() == 2) os << "(pi), pi^2 = " << field_->eisenstein_c() << "*" << field_->prime();
  os << "\n";
  for (int i : indices_) {
    os << "  g" << i << " = " << gen(i).to_string() << "\n";
    os << "  B" << i << " = " << ball(i).to_string() << "\n";
  }
  return os.str();
}

bool GoodPositionReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const Item& it) { return it.ok; });
}

std::string GoodPositionReport::to_string() const {
  std::ostringstream os;
  for (const auto& it : items) {
    os << (it.ok ? "PASS " : "FAIL ") << it.condition;
    if (!it.detail.empty()) os << ": " << it.detail;
    os << "\n";
  }
  return os.str();
}

GoodPositionReport verify_good_position(const SchottkyGroup& group) {
  GoodPositionReport rep;
  const auto& idx = group.indices();
  for (int i : idx) {
    const Ball& B = group.ball(i);
    rep.items.push_back({"B" + std::to_string(i) + " is an open ball", !B.closed, B.to_string()});
  }
  for (size_t a = 0; a < idx.size(); ++a) {
    for (size_t b = a + 1; b < idx.size(); ++b) {
      const int i = idx[a], j = idx[b];
      bool ok = false;
      std::string detail;
      try {
        ok = balls_disjoint(group.ball(i).closure(), group.ball(j).closure());
      } catch (const std::exception& ex) {
        detail = ex.what();
      }
      rep.items.push_back({"B" + std::to_string(i) + "+ and B" + std::to_string(j) +
                               "+ are disjoint",
                           ok, detail});
    }
  }
  for (int i : idx) {
    bool ok = false;
    std::string detail;
    try {
      Ball image = ball_image(group.gen(i), group.ball(-i).complement());
      ok = image.same_set(group.ball(i).closure());
      detail = "image " + image.to_string();
    } catch (const std::exception& ex) {
      detail = ex.what();
    }
    rep.items.push_back({"g" + std::to_string(i) + "(P1 - B" + std::to_string(-i) + ") = B" +
                             std::to_string(i) + "+",
                         ok, detail});
  }
  for (int k = 1; k <= group.genus(); ++k) {
    bool ok = false;
    std::string detail;
    try {
      ok = group.gen(k).is_hyperbolic();
      auto vt = group.gen(k).trace().valuation();
      detail = "v(tr) = " + (vt ? std::to_string(*vt) : std::string("inf")) +
               ", v(det) = " + std::to_string(*group.gen(k).det().valuation());
    } catch (const std::exception& ex) {
      detail = ex.what();
    }
    rep.items.push_back({"g" + std::to_string(k) + " is hyperbolic", ok, detail});
  }
  return rep;
}

namespace {

void word_dfs(const SchottkyGroup& group, int remaining, ReducedWord& w,
              const std::function<void(const ReducedWord&)>& visit) {
  if (remaining == 0) {
    visit(w);
    return;
  }
  const int last = w.tail();
  const Moebius prefix = w.matrix;
  for (int j : group.indices()) {
    if (j == -last) continue;
    w.letters.push_back(j);
    w.matrix = prefix * group.gen(j);
    word_dfs(group, remaining - 1, w, visit);
    w.letters.pop_back();
  }
  w.matrix = prefix;
}

void sequence_dfs(int g, int remaining, std::vector<int>& s,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (remaining == 0) {
    visit(s);
    return;
  }
  const int last = s.empty() ? 0 : s.back();
  for (int k = 1; k <= g; ++k) {
    for (int j : {k, -k}) {
      if (j == -last) continue;
      s.push_back(j);
      sequence_dfs(g, remaining - 1, s, visit);
      s.pop_back();
    }
  }
}

}  // namespace

void for_each_word(const SchottkyGroup& group, int n,
                   const std::function<void(const ReducedWord&)>& visit, int head) {
  if (n < 0) return;
  ReducedWord w{{}, Moebius::identity(group.field(), group.precision())};
  if (n == 0) {
    if (head == 0) visit(w);
    return;
  }
  for (int i : group.indices()) {
    if (head != 0 && i != head) continue;
    w.letters = {i};
    w.matrix = group.gen(i);
    word_dfs(group, n - 1, w, visit);
  }
}

std::vector<ReducedWord> words_of_length(const SchottkyGroup& group, int n, int head) {
  std::vector<ReducedWord> out;
  for_each_word(group, n, [&](const ReducedWord& w) { out.push_back(w); }, head);
  return out;
}

void for_each_reduced_sequence(int g, int n,
                               const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> s;
  if (n >= 0) sequence_dfs(g, n, s, visit);
}

ReducedWord make_word(const SchottkyGroup& group, std::vector<int> letters) {
  ReducedWord w{{}, Moebius::identity(group.field(), group.precision())};
  for (size_t k = 0; k < letters.size(); ++k) {
    const int j = letters[k];
    if (j == 0 || std::abs(j) > group.genus())
      throw std::invalid_argument("letter out of range: " + std::to_string(j));
    if (k > 0 && letters[k - 1] == -j) throw std::invalid_argument("word is not reduced");
    w.matrix = w.matrix * group.gen(j);
  }
  w.letters = std::move(letters);
  return w;
}

BallOrbitEntry gamma_ball(const SchottkyGroup& group, const ReducedWord& word) {
  if (word.letters.empty()) throw std::invalid_argument("B(gamma) needs a nonempty word");
  Ball B = group.ball(word.tail());
  for (int k = word.length() - 2; k >= 0; --k) B = ball_image(group.gen(word.letters[k]), B);
  return BallOrbitEntry{word, B, B.center, B.radius_val};
}

ReducedPoint reduce_point(const SchottkyGroup& group, const ProjPoint& z) {
  ReducedPoint out{{}, z};
  const long cap = 4L * group.precision() * group.genus();
  for (;;) {
    int hit = 0;
    for (int i : group.indices()) {
      if (group.ball(i).contains(out.z0)) {
        hit = i;
        break;
      }
    }
    if (hit == 0) return out;
    if (static_cast<long>(out.word.size()) >= cap)
      throw LimitPointSuspicion("point did not reach the fundamental domain after " +
                                std::to_string(cap) + " steps; it is numerically a limit point");
    out.z0 = group.gen(-hit).apply(out.z0);
    out.word.push_back(hit);
  }
}

ProjPoint anchor_point(const SchottkyGroup& group, int s, int variant) {
  if (s < 0) return group.gen(-s).apply(anchor_point(group, -s, variant));
  const Ball& B = group.ball(-s);
  const auto& F = group.field();
  const int N = group.precision();
  auto offset = LocalFieldElement::uniformizer_power(B.radius_val, F, N);
  if (variant != 0)
    offset += LocalFieldElement::from_integer(variant, F, N) *
              LocalFieldElement::uniformizer_power(B.radius_val + 1, F, N);
  return ProjPoint(B.center + offset);
}

Divisor reduce_divisor(const SchottkyGroup& group, const Divisor& D, int variant) {
  Divisor out;
  for (const auto& [z, m] : D.terms()) {
    ReducedPoint rp = reduce_point(group, z);
    out.add(rp.z0, m);
    for (int s : rp.word) {
      out.add(anchor_point(group, -s, variant), m);
      out.add(anchor_point(group, s, variant), -m);
    }
  }
  return out;
}

SchottkyGroup normalize_infinity(const SchottkyGroup& group) {
  if (group.is_normalized()) return group;
  const auto& F = group.field();
  const int N = group.precision();
  std::vector<LocalFieldElement> candidates;
  for (long d = 0; d < F->prime(); ++d) candidates.push_back(LocalFieldElement::from_integer(d, F, N));
  int lo = 0, hi = 0;
  for (int i : group.indices()) {
    lo = std::min(lo, group.ball(i).radius_val);
    hi = std::max(hi, group.ball(i).radius_val);
  }
  for (int i : group.indices()) {
    const auto& c = group.ball(i).center;
    for (int k = lo - 2; k <= hi + 2; ++k)
      for (long d = 1; d < F->prime(); ++d)
        candidates.push_back(c + LocalFieldElement::from_integer(d, F, N) *
                                     LocalFieldElement::uniformizer_power(k, F, N));
  }
  for (const auto& q : candidates) {
    bool inside = false;
    try {
      inside = group.in_open_domain(ProjPoint(q));
    } catch (const PrecisionError&) {
      continue;
    }
    if (!inside) continue;
    auto one = LocalFieldElement::one(F, N);
    auto zero = LocalFieldElement::zero(F, N);
    Moebius h(q, one, one, zero);
    Moebius hinv = h.inverse();
    std::vector<Moebius> gens;
    for (int k = 1; k <= group.genus(); ++k) gens.push_back(hinv * group.gen(k) * h);
    std::vector<std::pair<int, Ball>> balls;
    for (int i : group.indices()) balls.emplace_back(i, ball_image(hinv, group.ball(i)));
    SchottkyGroup out(F, N, std::move(gens), std::move(balls));
    out.set_conjugation(group.conjugation() ? *group.conjugation() * h : h);
    if (!out.is_normalized()) continue;
    return out;
  }
  throw NormalizationError(
      "no point of the open fundamental domain found among the candidates; "
      "a field extension may be needed");
}

}  // namespace mumford
