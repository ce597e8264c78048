#include "mumford/bench.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mumford {

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << kBenchHeader << "\n";
  for (const auto& r : records) {
    if (r.group.find(',') != std::string::npos || r.fingerprint.find(',') != std::string::npos)
      throw std::invalid_argument("commas are not allowed in CSV fields");
    os << r.group << ',' << r.algo << ',' << r.m << ',' << r.nu << ',' << r.time_ns << ','
       << r.fingerprint << "\n";
  }
}

std::vector<BenchRecord> read_bench_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kBenchHeader)
    throw std::runtime_error("unexpected CSV header: " + line);
  std::vector<BenchRecord> out;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 6) throw std::runtime_error("row " + std::to_string(row) + ": expected 6 fields");
    try {
      out.push_back({f[0], f[1], std::stoi(f[2]), std::stoi(f[3]), std::stoll(f[4]), f[5]});
    } catch (const std::logic_error&) {
      throw std::runtime_error("row " + std::to_string(row) + ": bad number");
    }
  }
  return out;
}

std::int64_t median_ns(std::vector<std::int64_t> samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2;
}

std::vector<ProjPoint> random_domain_points(const SchottkyGroup& group, std::mt19937_64& rng,
                                            int count, int separation) {
  const auto& F = group.field();
  const int N = group.precision();
  const long p = F->prime();
  long span = 1;
  for (int k = 0; k < 6; ++k) span *= p;
  std::uniform_int_distribution<long> digit(0, span - 1);
  std::uniform_int_distribution<int> shift(0, 2);
  std::vector<ProjPoint> out;
  for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
    if (tries > 10000 * count) throw std::runtime_error("could not sample points of the domain");
    auto x = LocalFieldElement::from_integer(digit(rng), F, N);
    if (F->e() == 2)
      x += LocalFieldElement::from_integer(digit(rng), F, N) * LocalFieldElement::uniformizer_power(1, F, N);
    x = x.shifted(-shift(rng));
    ProjPoint z(x);
    bool ok = false;
    try {
      ok = group.in_closed_domain(z);
    } catch (const PrecisionError&) {
      ok = false;
    }
    for (const auto& w : out) {
      if (!ok) break;
      const auto d = (x - w.value()).valuation();
      ok = d && *d - std::min(x.valuation_or_precision(), w.value().valuation_or_precision()) < separation;
    }
    if (ok) out.push_back(z);
  }
  return out;
}

Divisor random_elementary_divisor(const SchottkyGroup& group, std::mt19937_64& rng) {
  auto pts = random_domain_points(group, rng, 2);
  return Divisor::elementary(pts[0], pts[1]);
}

std::pair<Divisor, Divisor> random_divisor_pair(const SchottkyGroup& group, std::mt19937_64& rng) {
  auto pts = random_domain_points(group, rng, 4);
  return {Divisor::elementary(pts[0], pts[1]), Divisor::elementary(pts[2], pts[3])};
}

}  // namespace mumford
