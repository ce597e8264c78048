#pragma once

// Schottky groups given by generators in good position: verification,
// reduced-word enumeration, the nested balls B(gamma), and reduction of
// points and divisors into the fundamental domain.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mumford/projline.hpp"

namespace mumford {

// Letters are generator indices in {+-1, ..., +-g}; -i stands for gamma_i^-1.
struct ReducedWord {
  std::vector<int> letters;
  Moebius matrix;

  int length() const { return static_cast<int>(letters.size()); }
  int head() const { return letters.empty() ? 0 : letters.front(); }
  int tail() const { return letters.empty() ? 0 : letters.back(); }
  std::string to_string() const;
};

class SchottkyGroup {
 public:
  // generators[k] is gamma_{k+1}; balls are given by signed index.
  SchottkyGroup(FieldPtr field, int precision, std::vector<Moebius> generators,
                std::vector<std::pair<int, Ball>> balls);

  const FieldPtr& field() const { return field_; }
  int precision() const { return precision_; }
  int genus() const { return static_cast<int>(gens_.size()); }

  // gamma_i for i in +-1..+-g.
  const Moebius& gen(int i) const { return mats_[slot(i)]; }
  const Ball& ball(int i) const { return balls_[slot(i)]; }
  // 1, -1, 2, -2, ...
  const std::vector<int>& indices() const { return indices_; }
  static int slot(int i) { return i > 0 ? 2 * (i - 1) : 2 * (-i - 1) + 1; }

  // Point of F+ (outside every open B_i).
  bool in_closed_domain(const ProjPoint& z) const;
  // Point of F (outside every closed B_i+).
  bool in_open_domain(const ProjPoint& z) const;
  // All 2g balls are proper disks and infinity lies outside every B_i+.
  bool is_normalized() const;

  // Conjugation record: this group is h^-1 G h for the original group G.
  const std::optional<Moebius>& conjugation() const { return conjugation_; }
  void set_conjugation(Moebius h) { conjugation_ = std::move(h); }

  std::string to_string() const;

 private:
  FieldPtr field_;
  int precision_;
  std::vector<Moebius> gens_;
  std::vector<Moebius> mats_;
  std::vector<Ball> balls_;
  std::vector<int> indices_;
  std::optional<Moebius> conjugation_;
};

struct GoodPositionReport {
  struct Item {
    std::string condition;
    bool ok;
    std::string detail;
  };
  std::vector<Item> items;
  bool passed() const;
  std::string to_string() const;
};

GoodPositionReport verify_good_position(const SchottkyGroup& group);

// Depth-first visit of the reduced words of length n.  With head != 0 only
// the class Gamma_n^(head) is visited; otherwise the classes are visited in
// the order of indices().
void for_each_word(const SchottkyGroup& group, int n,
                   const std::function<void(const ReducedWord&)>& visit, int head = 0);
std::vector<ReducedWord> words_of_length(const SchottkyGroup& group, int n, int head = 0);
// Letter sequences only, for a free group of rank g.
void for_each_reduced_sequence(int g, int n,
                               const std::function<void(const std::vector<int>&)>& visit);

ReducedWord make_word(const SchottkyGroup& group, std::vector<int> letters);

// B(gamma) = gamma(P1 - B_{-t}+) for a word with tail t.
struct BallOrbitEntry {
  ReducedWord word;
  Ball ball;
  LocalFieldElement center;
  int radius_val;
};
BallOrbitEntry gamma_ball(const SchottkyGroup& group, const ReducedWord& word);

class LimitPointSuspicion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReducedPoint {
  // z = gamma_{word[0]} gamma_{word[1]} ... z0.
  std::vector<int> word;
  ProjPoint z0;
};
ReducedPoint reduce_point(const SchottkyGroup& group, const ProjPoint& z);

// Boundary anchor z_s on the sphere of B_{-s}, with gamma_s z_s on the sphere
// of B_s.  Different variants give different points on the same spheres.
ProjPoint anchor_point(const SchottkyGroup& group, int s, int variant = 0);
// A degree-zero divisor supported on F+ with the same pairing against every
// E over the group.
Divisor reduce_divisor(const SchottkyGroup& group, const Divisor& D, int variant = 0);

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conjugates the group so that infinity lies in F and all balls are proper.
// The returned group records h with new = h^-1 old h; divisors move by h^-1.
SchottkyGroup normalize_infinity(const SchottkyGroup& group);

}  // namespace mumford
