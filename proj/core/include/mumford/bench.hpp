#pragma once

// Timing records shared by the CLI and the plotting script.
// CSV columns: group,algo,m,nu,time_ns,fingerprint

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "mumford/schottky.hpp"

namespace mumford {

struct BenchRecord {
  std::string group;
  std::string algo;  // "naive" or "fast"
  int m = 0;
  int nu = 0;
  std::int64_t time_ns = 0;
  std::string fingerprint;
};

inline constexpr const char* kBenchHeader = "group,algo,m,nu,time_ns,fingerprint";

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records);
// Throws std::runtime_error on a malformed header or row.
std::vector<BenchRecord> read_bench_csv(std::istream& is);

// Median of the samples; the mean of the middle two for even counts.
std::int64_t median_ns(std::vector<std::int64_t> samples);

// Points of F+ drawn from small integers (and x + y pi over a ramified
// field), scaled by pi^-j for j in {0, 1, 2}.  Any two returned points
// differ in their first `separation` digits.
std::vector<ProjPoint> random_domain_points(const SchottkyGroup& group, std::mt19937_64& rng,
                                            int count, int separation = 4);
// (z1) - (z2) with z1, z2 from random_domain_points.
Divisor random_elementary_divisor(const SchottkyGroup& group, std::mt19937_64& rng);
// A pair (D, E) of elementary divisors with four distinct support points.
std::pair<Divisor, Divisor> random_divisor_pair(const SchottkyGroup& group, std::mt19937_64& rng);

}  // namespace mumford
