#pragma once

// Iterative evaluation of theta pairings.  For each index i the partial
// products over words with head i are rigid functions on P1 - B_i; in the
// coordinate t = tau_i(z) they become unit power series on |t| <= 1, and
// one more letter is a composition with a fixed Moebius map.

#include <optional>
#include <vector>

#include "mumford/bounds.hpp"
#include "mumford/group_io.hpp"
#include "mumford/tate.hpp"

namespace mumford {

// tau_i sends center(B_{-i}) -> 0, varpi_i -> 1, center(B_i) -> infinity,
// where varpi_i = center(B_i) + pi^{r(B_i)} lies on the sphere of B_i.
struct Frame {
  int index = 0;
  LocalFieldElement varpi;
  Moebius tau;
  Moebius tau_inv;
  // tau_i(infinity).
  LocalFieldElement t_inf;
  // Zeros of the head-i factors satisfy v(t) <= -decay in this coordinate.
  int decay = 0;
  int degree_cap = 0;
};

struct FastOptions {
  int guard_digits = 10;
  // Overrides the truncation length computed from the bounds.
  std::optional<int> nu;
  // Step limit for the adaptive stop.
  int max_steps = 4096;
  bool parallel = false;
  // Keep the unit distances ||G_k^(i) - 1|| of every step.
  bool record_history = false;
};

// 2g series indexed by SchottkyGroup::slot.
using SeriesTuple = std::vector<TateSeries>;

struct ThetaSeries {
  Divisor E;
  // phi_0 phi_1 = prod over (point, mult) of (z - point)^mult.
  std::vector<std::pair<LocalFieldElement, long>> prefix;
  // Accumulated F_{<=nu}^(i) with constant term 1, their derivatives, and
  // scalars s_i with s_i * F^(i)(tau_i(infinity)) = 1.
  SeriesTuple F;
  SeriesTuple dF;
  std::vector<LocalFieldElement> scalar;
  int nu = 0;
  // history[k - 2][slot] = v(||G_k - 1||).
  std::vector<std::vector<int>> history;
};

struct PeriodMatrix {
  std::vector<std::vector<LocalFieldElement>> Q;
  int nu = 0;
  ProjPoint z0, z1;
};

class FastEngine {
 public:
  // Normalizes the group if needed; divisors passed to the engine are in the
  // coordinates of `group` and are moved to the normalized model internally.
  FastEngine(const SchottkyGroup& group, int m_digits, FastOptions options = {});

  const SchottkyGroup& group() const { return group_; }
  int m_digits() const { return m_; }
  // Working precision in units of v(pi).
  int precision() const { return N_; }
  // Truncation length from the bounds, or 0 when the bounds could not be
  // certified and theta_series stops once every ||G_k - 1|| <= p^-m.
  int nu() const { return nu_; }
  bool adaptive() const { return !bounds_.has_value() && !options_.nu; }
  const std::optional<BoundsData>& bounds() const { return bounds_; }
  const FastOptions& options() const { return options_; }
  const Frame& frame(int i) const { return frames_[SchottkyGroup::slot(i)]; }
  const MoebiusComposer& transition(int i, int j) const;

  // Moves a divisor from the input coordinates to the normalized model.
  Divisor to_model(const Divisor& D) const;
  ProjPoint to_model(const ProjPoint& z) const;
  // True when the engine conjugated the input group; model_map() is then
  // the map from input coordinates to the model.
  bool moved() const { return moved_; }
  const Moebius& model_map() const { return to_model_; }

  // G_2^(i) for E supported on F+ (model coordinates), normalized to
  // constant term 1.
  SeriesTuple init_series(const Divisor& E) const;
  SeriesTuple nabla(const SeriesTuple& G) const;
  ThetaSeries theta_series(const Divisor& E) const;

  // ((z) - (inf), E)_{<= nu} for z in F+ (model coordinates).
  LocalFieldElement eval(const ThetaSeries& TS, const ProjPoint& z) const;
  // Logarithmic derivative in z of the same function.
  LocalFieldElement dlog(const ThetaSeries& TS, const LocalFieldElement& z) const;

  // Deterministic points of the open domain F (model coordinates).
  std::vector<ProjPoint> domain_points(int count) const;

 private:
  SchottkyGroup group_;
  bool moved_ = false;
  Moebius to_model_;
  int m_ = 0;
  int N_ = 0;
  int nu_ = 0;
  FastOptions options_;
  std::optional<BoundsData> bounds_;
  std::vector<Frame> frames_;
  // transitions_[slot(i)][slot(j)], empty for j = -i.
  std::vector<std::vector<MoebiusComposer>> transitions_;
};

// (D, E) over the group to m digits; D and E in the input coordinates of
// the engine.
// nu_used, if given, receives the truncation length of the series.
LocalFieldElement theta_pair(const FastEngine& engine, const Divisor& D, const Divisor& E,
                             int* nu_used = nullptr);

// dlog u_gamma(z) with u_gamma(z) = ((z) - (inf), (gamma z0) - (z0)).
LocalFieldElement u_gamma_dlog(const FastEngine& engine, const ReducedWord& gamma,
                               const ProjPoint& z, const ProjPoint& z0);
// (dlog u_{gamma_1}(z) : ... : dlog u_{gamma_g}(z)).
std::vector<LocalFieldElement> canonical_embedding(const FastEngine& engine, const ProjPoint& z);

PeriodMatrix period_matrix(const FastEngine& engine);
PeriodMatrix period_matrix(const FastEngine& engine, const ProjPoint& z0, const ProjPoint& z1);

struct LoadedEngine {
  GroupFile file;
  FastEngine engine;
};

// Parses the group with m + guard + extra digits and builds the engine,
// retrying with more digits while the frames lose precision.
LoadedEngine engine_from_json(const std::string& json_text, int m_digits, FastOptions options = {},
                              int extra_digits = 10);

// Digits for a naive product over words of length <= n; a product of
// normalized matrices can lose up to one digit per letter.
int naive_digits(int m_digits, int n, int guard_digits = 10);

}  // namespace mumford
