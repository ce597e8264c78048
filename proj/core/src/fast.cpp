#include "mumford/fast.hpp"

#include <algorithm>
#include <future>
#include <limits>

namespace mumford {

namespace {

// Largest v(t) over the points of X, for X not containing 0.
int max_valuation(const Ball& X) {
  const int R = X.kpoint_radius();
  const int vc = X.center.valuation_or_precision();
  if (X.kind == Ball::Kind::Disk) {
    if (vc >= R) throw std::domain_error("zero set reaches t = 0");
    return vc;
  }
  if (vc < R) throw std::domain_error("zero set reaches t = 0");
  return R - 1;
}

Frame make_frame(const SchottkyGroup& G, int i, int N) {
  const auto& F = G.field();
  const Ball& Bi = G.ball(i);
  const Ball& Bm = G.ball(-i);
  Frame fr;
  fr.index = i;
  const auto pi_r = LocalFieldElement::uniformizer_power(Bi.radius_val, F, N);
  fr.varpi = Bi.center + pi_r;
  const auto k = pi_r / (fr.varpi - Bm.center);
  const auto one = LocalFieldElement::one(F, N);
  fr.tau = Moebius(k, -(k * Bm.center), one, -Bi.center);
  fr.tau_inv = fr.tau.inverse();
  fr.t_inf = k;
  return fr;
}

}  // namespace

FastEngine::FastEngine(const SchottkyGroup& group, int m_digits, FastOptions options)
    : group_(normalize_infinity(group)), m_(m_digits), options_(options) {
  if (m_digits < 1) throw std::invalid_argument("m must be positive");
  if (!group.is_normalized()) {
    moved_ = true;
    // The recorded conjugation is composed with any earlier one.
    to_model_ = group_.conjugation()->inverse();
    if (group.conjugation()) to_model_ = (to_model_ * *group.conjugation()).normalized();
  }
  const auto& F = group_.field();
  const int e = F->e();
  N_ = e * (m_digits + options_.guard_digits);
  if (group_.precision() < N_)
    throw PrecisionError("group is known to " + std::to_string(group_.precision()) +
                         " but the series need " + std::to_string(N_));

  try {
    bounds_ = compute_bounds(group_);
  } catch (const BoundsUnavailable&) {
    bounds_.reset();
  }
  if (options_.nu) nu_ = std::max(2, *options_.nu);
  else if (bounds_)
    nu_ = nu_from_data(m_digits, *bounds_, std::nullopt, worst_delta_on_domain(group_));

  const auto& idx = group_.indices();
  frames_.resize(idx.size());
  // Frames are built at the full group precision; the centers may have
  // negative valuation and products of them cancel digits.
  for (int i : idx) frames_[SchottkyGroup::slot(i)] = make_frame(group_, i, group_.precision());

  for (int i : idx) {
    Frame& fr = frames_[SchottkyGroup::slot(i)];
    const Moebius push = fr.tau * group_.gen(i);
    int w = std::numeric_limits<int>::max();
    for (int j : idx) {
      if (j == -i) continue;
      const Ball X = ball_image(push, group_.ball(j).closure());
      w = std::min(w, -max_valuation(X));
    }
    if (w < 1) throw std::domain_error("no decay for the head-" + std::to_string(i) + " factors");
    fr.decay = w;
    fr.degree_cap = (N_ + w - 1) / w;
  }

  transitions_.assign(idx.size(), std::vector<MoebiusComposer>(idx.size()));
  for (int i : idx) {
    const Frame& fi = frame(i);
    const Moebius step = group_.gen(-i) * fi.tau_inv;
    for (int j : idx) {
      if (j == -i) continue;
      const Frame& fj = frame(j);
      transitions_[SchottkyGroup::slot(i)][SchottkyGroup::slot(j)] =
          MoebiusComposer(fj.tau * step, N_, fj.degree_cap, fi.degree_cap);
      const int got = transitions_[SchottkyGroup::slot(i)][SchottkyGroup::slot(j)].series().precision();
      if (got < N_)
        throw PrecisionError("transition map known only to " + std::to_string(got) + " of " +
                             std::to_string(N_) + "; load the group with more digits");
    }
  }
}

const MoebiusComposer& FastEngine::transition(int i, int j) const {
  if (j == -i) throw std::invalid_argument("no transition from i to -i");
  return transitions_[SchottkyGroup::slot(i)][SchottkyGroup::slot(j)];
}

Divisor FastEngine::to_model(const Divisor& D) const {
  return moved_ ? D.translated(to_model_) : D;
}

ProjPoint FastEngine::to_model(const ProjPoint& z) const {
  return moved_ ? to_model_.apply(z) : z;
}

SeriesTuple FastEngine::init_series(const Divisor& E) const {
  const auto& idx = group_.indices();
  SeriesTuple out(idx.size());
  for (int i : idx) {
    const Frame& fr = frame(i);
    const int cap = fr.degree_cap;
    TateSeries G = TateSeries::one(group_.field(), N_);
    const auto& A = fr.tau_inv.a();
    const auto& B = fr.tau_inv.b();
    const auto& C = fr.tau_inv.c();
    const auto& Dd = fr.tau_inv.d();
    for (int j : idx) {
      if (j == -i) continue;
      const Moebius g = group_.gen(i) * group_.gen(j);
      for (const auto& [w, n] : E.terms()) {
        const ProjPoint a = g.apply(w);
        if (a.is_infinity()) throw std::domain_error("translate of E at infinity");
        const auto& alpha = a.value();
        // z - alpha = ((A - alpha C) t + (B - alpha D)) / (C t + D); the
        // denominators and the constant cancel in the normalized product.
        const auto lambda = B - alpha * Dd;
        const auto kappa = (A - alpha * C) / lambda;
        if (kappa.abs_precision() < N_) throw PrecisionError("initial factor lost precision");
        const Integral ki = kappa.to_integral(N_);
        for (long r = 0; r < std::abs(n); ++r)
          G = n > 0 ? G.mul_linear(ki, cap) : G.div_linear(ki, cap);
      }
    }
    out[SchottkyGroup::slot(i)] = G.normalized().with_tail(std::max(G.tail_bound(), N_));
  }
  return out;
}

SeriesTuple FastEngine::nabla(const SeriesTuple& G) const {
  const auto& idx = group_.indices();
  auto one = [&](int i) {
    const Frame& fr = frame(i);
    TateSeries P = TateSeries::one(group_.field(), N_);
    for (int j : idx) {
      if (j == -i) continue;
      const TateSeries H = transition(i, j).apply(G[SchottkyGroup::slot(j)]);
      P = P.mul(H, fr.degree_cap);
    }
    // Past the cap every coefficient is below pi^N by the decay of the
    // zero set.
    return P.normalized().with_tail(N_);
  };
  SeriesTuple out(idx.size());
  if (options_.parallel) {
    std::vector<std::future<TateSeries>> jobs;
    for (int i : idx) jobs.push_back(std::async(std::launch::async, one, i));
    for (size_t k = 0; k < idx.size(); ++k) out[SchottkyGroup::slot(idx[k])] = jobs[k].get();
  } else {
    for (int i : idx) out[SchottkyGroup::slot(i)] = one(i);
  }
  return out;
}

ThetaSeries FastEngine::theta_series(const Divisor& E) const {
  if (E.degree() != 0) throw std::invalid_argument("E must have degree zero");
  for (const auto& t : E.terms())
    if (!group_.in_closed_domain(t.first))
      throw std::domain_error("E is not supported on the fundamental domain");
  ThetaSeries TS;
  TS.E = E;
  TS.nu = nu_;
  for (const auto& [w, n] : E.terms()) {
    if (!w.is_infinity()) TS.prefix.emplace_back(w.value(), n);
    for (int j : group_.indices()) TS.prefix.emplace_back(group_.gen(j).apply(w).value(), n);
  }

  const auto& idx = group_.indices();
  SeriesTuple G = init_series(E);
  SeriesTuple acc = G;
  auto record = [&](const SeriesTuple& S) {
    if (!options_.record_history) return;
    std::vector<int> h(idx.size());
    for (size_t s = 0; s < idx.size(); ++s) h[s] = S[s].unit_distance_val();
    TS.history.push_back(std::move(h));
  };
  record(G);
  // Adaptive stop: ||nabla G - 1|| <= ||G - 1||, so once every component is
  // within p^-m of 1 the remaining factors are too.
  const int target = group_.field()->e() * m_;
  auto settled = [&](const SeriesTuple& S) {
    for (const auto& x : S)
      if (x.unit_distance_val() < target) return false;
    return true;
  };
  const bool adapt = adaptive();
  int last = 2;
  for (int k = 3; adapt ? !settled(G) : k <= nu_; ++k) {
    if (adapt && k > options_.max_steps)
      throw std::runtime_error("theta series did not settle within the step limit");
    G = nabla(G);
    last = k;
    record(G);
    for (int i : idx) {
      const size_t s = SchottkyGroup::slot(i);
      acc[s] = acc[s].mul(G[s], frame(i).degree_cap);
    }
  }
  if (adapt) TS.nu = last;
  TS.F = acc;
  TS.dF.resize(idx.size());
  TS.scalar.resize(idx.size());
  for (int i : idx) {
    const size_t s = SchottkyGroup::slot(i);
    TS.dF[s] = acc[s].derivative();
    TS.scalar[s] = acc[s].eval(frame(i).t_inf).inverse();
  }
  return TS;
}

LocalFieldElement FastEngine::eval(const ThetaSeries& TS, const ProjPoint& z) const {
  if (z.is_infinity()) throw std::invalid_argument("evaluation at infinity");
  const auto& x = z.value();
  LocalFieldElement num = LocalFieldElement::one(group_.field(), N_);
  LocalFieldElement den = num;
  for (const auto& [w, n] : TS.prefix) {
    const auto d = x - w;
    if (d.is_zero()) throw SupportCollision("evaluation point meets a translate of E");
    if (n > 0) num *= d.pow(n);
    else den *= d.pow(-n);
  }
  for (int i : group_.indices()) {
    const size_t s = SchottkyGroup::slot(i);
    const auto t = frame(i).tau.apply(z);
    if (t.is_infinity() || (t.value().valuation() && *t.value().valuation() < 0))
      throw std::domain_error("evaluation point outside the fundamental domain");
    num *= TS.scalar[s] * TS.F[s].eval(t.value());
  }
  return num / den;
}

LocalFieldElement FastEngine::dlog(const ThetaSeries& TS, const LocalFieldElement& z) const {
  LocalFieldElement out = LocalFieldElement::zero(group_.field(), N_);
  for (const auto& [w, n] : TS.prefix) {
    const auto d = z - w;
    if (d.is_zero()) throw SupportCollision("evaluation point meets a translate of E");
    out += LocalFieldElement::from_integer(n, group_.field(), N_) / d;
  }
  const ProjPoint P(z);
  for (int i : group_.indices()) {
    const size_t s = SchottkyGroup::slot(i);
    const Frame& fr = frame(i);
    const auto t = fr.tau.apply(P);
    if (t.is_infinity() || (t.value().valuation() && *t.value().valuation() < 0))
      throw std::domain_error("evaluation point outside the fundamental domain");
    out += TS.dF[s].eval(t.value()) / TS.F[s].eval(t.value()) * fr.tau.derivative(P);
  }
  return out;
}

std::vector<ProjPoint> FastEngine::domain_points(int count) const {
  const auto& F = group_.field();
  std::vector<ProjPoint> out;
  auto try_add = [&](const LocalFieldElement& x) {
    if (static_cast<int>(out.size()) >= count) return;
    ProjPoint z(x);
    bool ok = false;
    try {
      ok = group_.in_open_domain(z);
    } catch (const PrecisionError&) {
      ok = false;
    }
    for (const auto& q : out) ok = ok && !q.equals(z);
    if (ok) out.push_back(z);
  };
  for (long d = 0; d < 4 * F->prime(); ++d) try_add(LocalFieldElement::from_integer(d, F, N_));
  for (int k = 1; k <= N_ && static_cast<int>(out.size()) < count; ++k)
    for (long d = 1; d < F->prime(); ++d)
      try_add(LocalFieldElement::from_integer(d, F, N_) *
              LocalFieldElement::uniformizer_power(-k, F, N_));
  if (static_cast<int>(out.size()) < count) throw std::runtime_error("no points found in the domain");
  return out;
}

LocalFieldElement theta_pair(const FastEngine& engine, const Divisor& D, const Divisor& E,
                             int* nu_used) {
  if (D.degree() != 0 || E.degree() != 0)
    throw std::invalid_argument("pairing requires degree-zero divisors");
  const auto& G = engine.group();
  Divisor Dr = reduce_divisor(G, engine.to_model(D), 0);
  Divisor Er = reduce_divisor(G, engine.to_model(E), 1);
  if (Dr.contains_infinity()) {
    if (Er.contains_infinity()) throw SupportCollision("both reduced divisors contain infinity");
    std::swap(Dr, Er);
  }
  if (Dr.empty() || Er.empty()) {
    if (nu_used) *nu_used = engine.nu();
    return LocalFieldElement::one(G.field(), engine.precision());
  }
  const ThetaSeries TS = engine.theta_series(Er);
  if (nu_used) *nu_used = TS.nu;
  LocalFieldElement out = LocalFieldElement::one(G.field(), engine.precision());
  for (const auto& [z, m] : Dr.terms()) out *= engine.eval(TS, z).pow(m);
  return out;
}

namespace {

// dlog of ((.) - (inf), E) at z given in input coordinates.
LocalFieldElement dlog_at(const FastEngine& engine, const ThetaSeries& TS, const ProjPoint& z) {
  const auto& G = engine.group();
  const ProjPoint zm = engine.to_model(z);
  ReducedPoint rp = reduce_point(G, zm);
  if (rp.z0.is_infinity()) throw std::domain_error("dlog at infinity");
  LocalFieldElement d = engine.dlog(TS, rp.z0.value());
  if (!rp.word.empty()) {
    // zm = W(z0), and the function is automorphic up to constants.
    Moebius W = Moebius::identity(G.field(), G.precision());
    for (int s : rp.word) W = (W * G.gen(s)).normalized();
    d /= W.derivative(rp.z0);
  }
  if (!engine.moved()) return d;
  if (z.is_infinity()) throw std::domain_error("dlog at infinity");
  return d * engine.model_map().derivative(z);
}

PeriodMatrix periods_in_model(const FastEngine& engine, const ProjPoint& z0, const ProjPoint& z1) {
  const auto& G = engine.group();
  PeriodMatrix P;
  P.nu = engine.nu();
  P.z0 = z0;
  P.z1 = z1;
  const int g = G.genus();
  P.Q.assign(g, std::vector<LocalFieldElement>(g));
  for (int j = 1; j <= g; ++j) {
    const Divisor E = Divisor::elementary(G.gen(j).apply(z1), z1);
    const ThetaSeries TS = engine.theta_series(reduce_divisor(G, E, 1));
    for (int i = 1; i <= g; ++i) {
      const Divisor D = reduce_divisor(G, Divisor::elementary(G.gen(i).apply(z0), z0), 0);
      LocalFieldElement q = LocalFieldElement::one(G.field(), engine.precision());
      for (const auto& [z, m] : D.terms()) q *= engine.eval(TS, z).pow(m);
      P.Q[i - 1][j - 1] = q;
    }
  }
  return P;
}

}  // namespace

LocalFieldElement u_gamma_dlog(const FastEngine& engine, const ReducedWord& gamma,
                               const ProjPoint& z, const ProjPoint& z0) {
  const Divisor E = Divisor::elementary(gamma.matrix.apply(z0), z0);
  const ThetaSeries TS = engine.theta_series(reduce_divisor(engine.group(), engine.to_model(E), 1));
  return dlog_at(engine, TS, z);
}

std::vector<LocalFieldElement> canonical_embedding(const FastEngine& engine, const ProjPoint& z) {
  const auto& G = engine.group();
  // u_gamma does not depend on the base point.
  const ProjPoint base = engine.domain_points(1).front();
  std::vector<LocalFieldElement> out;
  for (int i = 1; i <= G.genus(); ++i) {
    const Divisor E = Divisor::elementary(G.gen(i).apply(base), base);
    const ThetaSeries TS = engine.theta_series(reduce_divisor(G, E, 1));
    out.push_back(dlog_at(engine, TS, z));
  }
  return out;
}

PeriodMatrix period_matrix(const FastEngine& engine) {
  const auto pts = engine.domain_points(2);
  return periods_in_model(engine, pts[0], pts[1]);
}

PeriodMatrix period_matrix(const FastEngine& engine, const ProjPoint& z0, const ProjPoint& z1) {
  return periods_in_model(engine, engine.to_model(z0), engine.to_model(z1));
}

LoadedEngine engine_from_json(const std::string& json_text, int m_digits, FastOptions options,
                              int extra_digits) {
  int extra = extra_digits;
  for (int attempt = 0;; ++attempt) {
    GroupFile gf = parse_group(json_text, m_digits + options.guard_digits + extra);
    try {
      FastEngine engine(gf.group, m_digits, options);
      return LoadedEngine{std::move(gf), std::move(engine)};
    } catch (const PrecisionError&) {
      if (attempt >= 3) throw;
      extra = 2 * extra + m_digits + options.guard_digits;
    }
  }
}

int naive_digits(int m_digits, int n, int guard_digits) {
  return m_digits + guard_digits + n + 10;
}

}  // namespace mumford
