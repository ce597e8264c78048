#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mumford/bench.hpp"
#include "mumford/fast.hpp"
#include "mumford/group_io.hpp"
#include "mumford/naive.hpp"

namespace mumford::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("cannot write " + path);
}

std::int64_t elapsed_ns(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
}

// The first m p-adic digits, which is what the bounds guarantee.
LocalFieldElement to_digits(const LocalFieldElement& x, int m) {
  if (x.is_zero()) return x;
  return x.with_precision(x.valuation_or_precision() + x.field()->e() * m);
}

void require_good_position(const SchottkyGroup& G, std::ostream& err) {
  auto report = verify_good_position(G);
  if (!report.passed()) {
    err << report.to_string();
    throw VerificationFailure("generators are not in good position for the given balls");
  }
}

struct Settings {
  std::string group;
  int m = 20;
  bool naive = false;
  bool fast = false;
  bool parallel = false;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultWordBudget;
  int nu = 0;
  std::string D, E;
  std::vector<std::string> points;
  int from = 5, to = 20, step = 5, reps = 3;
  std::string algo = "both";
};

FastOptions fast_options(const Settings& s) {
  FastOptions o;
  o.parallel = s.parallel;
  if (s.nu > 0) o.nu = s.nu;
  return o;
}

// Runs body(digits) with more digits whenever the group entries cancel
// below the working precision.  A generator whose determinant vanishes to
// precision is retried too; it is reported as singular only at the end.
template <class Body>
auto with_headroom(int m, Body&& body) {
  int extra = 10;
  for (int attempt = 0;; ++attempt) {
    try {
      return body(m + 10 + extra);
    } catch (const PrecisionError&) {
      if (attempt >= 3) throw;
    } catch (const std::invalid_argument&) {
      if (attempt >= 3) throw;
    }
    extra = 2 * extra + m + 10;
  }
}

int cmd_check(const Settings& s, std::ostream& out) {
  const std::string text = read_file(s.group);
  return with_headroom(s.m, [&](int digits) {
    GroupFile gf = parse_group(text, digits);
    auto report = verify_good_position(gf.group);
    out << gf.name << "\n" << report.to_string();
    out << (report.passed() ? "good position: pass\n" : "good position: FAIL\n");
    return report.passed() ? kOk : kVerificationFailure;
  });
}

void print_bounds(const SchottkyGroup& G, int m, const std::optional<Divisor>& D, std::ostream& out) {
  const int e = G.field()->e();
  BoundsData b;
  try {
    b = compute_bounds(G);
  } catch (const BoundsUnavailable& ex) {
    out << "  " << ex.what() << "; the fast algorithm stops adaptively\n";
    return;
  }
  auto padic = [&](int v) { return mpq_class(v, e).get_str(); };
  const int wd = worst_delta_on_domain(G);
  out << "  n(Gamma) = " << b.n_gamma << "\n"
      << "  v(rho) = " << padic(b.rho_val) << "\n"
      << "  v(C) = " << padic(b.C_val) << "\n"
      << "  worst v(delta) on F+ = " << padic(wd) << "\n"
      << "  nu(m = " << m << ") for all of F+ = "
      << nu_from_data(m, b, std::nullopt, wd) << "\n";
  if (D) {
    out << "  v(delta(D)) = " << padic(delta_of_divisor(*D, b)) << "\n";
    auto R = diameter(*D);
    if (R) out << "  v(R_D) = " << padic(*R) << "\n";
    out << "  nu(m = " << m << ", D) = " << nu(m, *D, b) << "\n";
  }
}

int cmd_bounds(const Settings& s, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(s.group);
  const std::string report = with_headroom(s.m, [&](int digits) {
    std::ostringstream os;
    GroupFile gf = parse_group(text, digits);
    require_good_position(gf.group, err);
    std::optional<Divisor> D;
    if (!s.D.empty()) D = parse_divisor(s.D, gf.field, gf.group.precision());
    os << gf.name << " (as given)\n";
    try {
      print_bounds(gf.group, s.m, D, os);
    } catch (const PrecisionError&) {
      throw;
    } catch (const std::runtime_error& ex) {
      os << "  " << ex.what() << "\n";
    }
    if (!gf.group.is_normalized()) {
      SchottkyGroup H = normalize_infinity(gf.group);
      os << gf.name << " (conjugated so that infinity lies in F)\n";
      std::optional<Divisor> DH;
      if (D) DH = D->translated(H.conjugation()->inverse());
      print_bounds(H, s.m, DH, os);
    }
    return os.str();
  });
  out << report;
  return kOk;
}

json value_json(const LocalFieldElement& v, int m) {
  const auto x = to_digits(v, m);
  json j;
  j["value"] = x.to_string();
  j["fingerprint"] = v.fingerprint(v.field()->e() * m);
  j["valuation"] = v.valuation_or_precision();
  j["abs_precision"] = x.abs_precision();
  return j;
}

int cmd_theta(const Settings& s, std::ostream& out, std::ostream& err) {
  if (s.D.empty() || s.E.empty()) throw InputError("theta needs --D and --E");
  const std::string text = read_file(s.group);
  LocalFieldElement value;
  int used_nu = 0;
  std::int64_t ns = 0;
  std::uint64_t words = 0;
  if (s.naive) {
    GroupFile g0 = parse_group(text, s.m + 10);
    require_good_position(g0.group, err);
    int n = s.nu;
    if (n <= 0) {
      Divisor D0 = parse_divisor(s.D, g0.field, g0.group.precision());
      try {
        n = nu(s.m, D0, compute_bounds(g0.group));
      } catch (const BoundsUnavailable&) {
        throw InputError("no convergence bounds for these generators; pass --nu");
      }
    }
    const auto need = word_count(g0.group.genus(), n);
    if (s.budget != 0 && need > s.budget)
      throw BudgetExceeded("naive product needs " + std::to_string(need) + " words at nu = " +
                           std::to_string(n) + ", budget is " + std::to_string(s.budget));
    GroupFile gf = parse_group(text, naive_digits(s.m, n));
    const Divisor D = parse_divisor(s.D, gf.field, gf.group.precision());
    const Divisor E = parse_divisor(s.E, gf.field, gf.group.precision());
    const auto t0 = Clock::now();
    auto r = theta_naive(gf.group, D, E, n, s.budget);
    ns = elapsed_ns(t0);
    value = r.value;
    used_nu = n;
    words = r.words;
  } else {
    LoadedEngine le = engine_from_json(text, s.m, fast_options(s));
    require_good_position(le.file.group, err);
    const int P = le.file.group.precision();
    const Divisor D = parse_divisor(s.D, le.file.field, P);
    const Divisor E = parse_divisor(s.E, le.file.field, P);
    const auto t0 = Clock::now();
    value = theta_pair(le.engine, D, E, &used_nu);
    ns = elapsed_ns(t0);
  }
  const auto x = to_digits(value, s.m);
  out << "value: " << x.to_string() << "\n"
      << "fingerprint: " << value.fingerprint(value.field()->e() * s.m) << "\n"
      << "nu: " << used_nu << "\n"
      << "algorithm: " << (s.naive ? "naive" : "fast") << "\n";
  if (s.naive) out << "words: " << words << "\n";
  out << "time_ms: " << static_cast<double>(ns) / 1e6 << "\n";
  if (!s.out.empty()) {
    json j = value_json(value, s.m);
    j["nu"] = used_nu;
    j["algo"] = s.naive ? "naive" : "fast";
    j["time_ns"] = ns;
    j["m"] = s.m;
    write_output(s.out, j.dump(2) + "\n");
  }
  return kOk;
}

int cmd_periods(const Settings& s, std::ostream& out, std::ostream& err) {
  LoadedEngine le = engine_from_json(read_file(s.group), s.m, fast_options(s));
  require_good_position(le.file.group, err);
  const auto t0 = Clock::now();
  PeriodMatrix P = period_matrix(le.engine);
  const auto ns = elapsed_ns(t0);
  const int g = static_cast<int>(P.Q.size());
  json j;
  j["nu"] = P.nu;
  j["time_ns"] = ns;
  j["Q"] = json::array();
  for (int i = 0; i < g; ++i) {
    json row = json::array();
    for (int k = 0; k < g; ++k) {
      out << "Q[" << i + 1 << "][" << k + 1 << "] = " << to_digits(P.Q[i][k], s.m).to_string() << "\n";
      row.push_back(value_json(P.Q[i][k], s.m));
    }
    j["Q"].push_back(row);
  }
  out << "nu: " << P.nu << "\n";
  if (!s.out.empty()) write_output(s.out, j.dump(2) + "\n");
  return kOk;
}

int cmd_embed(const Settings& s, std::ostream& out, std::ostream& err) {
  if (s.points.empty()) throw InputError("embed needs at least one --z");
  LoadedEngine le = engine_from_json(read_file(s.group), s.m, fast_options(s));
  require_good_position(le.file.group, err);
  if (le.file.group.genus() < 3)
    err << "warning: genus " << le.file.group.genus() << " < 3, the map is not an embedding\n";
  json j = json::array();
  for (const auto& text : s.points) {
    const ProjPoint z = text == "inf" ? ProjPoint::infinity()
                                      : ProjPoint(parse_element(text, le.file.field,
                                                                le.file.group.precision()));
    auto coords = canonical_embedding(le.engine, z);
    out << text << " -> (";
    json row = json::array();
    for (size_t k = 0; k < coords.size(); ++k) {
      out << (k ? " : " : "") << to_digits(coords[k], s.m).to_string();
      row.push_back(value_json(coords[k], s.m));
    }
    out << ")\n";
    j.push_back({{"z", text}, {"coords", row}});
  }
  if (!s.out.empty()) write_output(s.out, j.dump(2) + "\n");
  return kOk;
}

int cmd_bench(const Settings& s, std::ostream& out, std::ostream& err) {
  if (s.algo != "both" && s.algo != "fast" && s.algo != "naive")
    throw InputError("--algo must be both, fast or naive");
  if (s.step < 1) throw InputError("--step must be positive");
  if (s.reps < 1) throw InputError("--reps must be positive");
  const std::string text = read_file(s.group);
  std::vector<BenchRecord> rows;
  bool mismatch = false;
  for (int m = s.from; m <= s.to; m += s.step) {
    LoadedEngine le = engine_from_json(text, m, fast_options(s));
    const std::string name = le.file.name;
    const int e = le.file.field->e();
    // Same seed for every m, so the divisors are the same points.
    std::mt19937_64 rng(s.seed);
    const auto [D, E] = random_divisor_pair(le.file.group, rng);
    int n = 0;
    std::string fast_fp;
    {
      std::vector<std::int64_t> times;
      LocalFieldElement v;
      for (int r = 0; r < s.reps; ++r) {
        const auto t0 = Clock::now();
        FastEngine engine(le.file.group, m, fast_options(s));
        v = theta_pair(engine, D, E, &n);
        times.push_back(elapsed_ns(t0));
      }
      fast_fp = v.fingerprint(e * m);
      if (s.algo != "naive") rows.push_back({name, "fast", m, n, median_ns(times), fast_fp});
    }
    if (s.algo == "fast") continue;
    const auto need = word_count(le.file.group.genus(), n);
    if (s.budget != 0 && need > s.budget) {
      err << "naive skipped at m = " << m << ": " << need << " words exceed the budget\n";
      continue;
    }
    GroupFile gf = parse_group(text, naive_digits(m, n));
    std::mt19937_64 rng2(s.seed);
    const auto [Dn, En] = random_divisor_pair(gf.group, rng2);
    std::vector<std::int64_t> times;
    LocalFieldElement v;
    for (int r = 0; r < s.reps; ++r) {
      const auto t0 = Clock::now();
      v = theta_naive(gf.group, Dn, En, n, s.budget).value;
      times.push_back(elapsed_ns(t0));
    }
    const std::string fp = v.fingerprint(e * m);
    if (fp != fast_fp) {
      err << "fingerprint mismatch at m = " << m << ": naive " << fp << " fast " << fast_fp << "\n";
      mismatch = true;
    }
    rows.push_back({name, "naive", m, n, median_ns(times), fp});
  }
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  if (s.out.empty()) out << csv.str();
  else write_output(s.out, csv.str());
  return mismatch ? kVerificationFailure : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta functions of p-adic Schottky groups"};
  app.require_subcommand(1);
  Settings s;

  auto group_arg = [&](CLI::App* c) { c->add_option("group", s.group, "group JSON file")->required(); };
  auto prec = [&](CLI::App* c) { c->add_option("--prec", s.m, "target p-adic digits")->check(CLI::PositiveNumber); };

  auto* check = app.add_subcommand("check", "verify good position");
  group_arg(check);
  prec(check);

  auto* bounds = app.add_subcommand("bounds", "convergence constants and truncation length");
  group_arg(bounds);
  prec(bounds);
  bounds->add_option("--D", s.D, "divisor for the D-dependent truncation length");

  auto* theta = app.add_subcommand("theta", "theta pairing (D, E)");
  group_arg(theta);
  prec(theta);
  theta->add_option("--D", s.D, "divisor, e.g. \"(0) - (inf)\"")->required();
  theta->add_option("--E", s.E, "divisor")->required();
  auto* fn = theta->add_flag("--naive", s.naive, "product over reduced words");
  auto* ff = theta->add_flag("--fast", s.fast, "iterative power series (default)");
  fn->excludes(ff);
  theta->add_option("--nu", s.nu, "truncation length override");
  theta->add_option("--budget", s.budget, "word budget for --naive (0 disables)");
  theta->add_option("--out", s.out, "write JSON here");
  theta->add_flag("--parallel", s.parallel, "run the components of a step in parallel");

  auto* periods = app.add_subcommand("periods", "multiplicative period matrix");
  group_arg(periods);
  prec(periods);
  periods->add_option("--out", s.out, "write JSON here");
  periods->add_flag("--parallel", s.parallel, "run the components of a step in parallel");

  auto* embed = app.add_subcommand("embed", "(dlog u_1 : ... : dlog u_g) at points");
  group_arg(embed);
  prec(embed);
  embed->add_option("--z", s.points, "point (repeatable)")->required();
  embed->add_option("--out", s.out, "write JSON here");
  embed->add_flag("--parallel", s.parallel, "run the components of a step in parallel");

  auto* bench = app.add_subcommand("bench", "naive vs fast timings as CSV");
  group_arg(bench);
  bench->add_option("--from", s.from, "first m");
  bench->add_option("--to", s.to, "last m");
  bench->add_option("--step", s.step, "m increment");
  bench->add_option("--algo", s.algo, "both, fast or naive");
  bench->add_option("--reps", s.reps, "repetitions per row (median is kept)");
  bench->add_option("--seed", s.seed, "seed for the divisor choice");
  bench->add_option("--budget", s.budget, "word budget for naive rows (0 disables)");
  bench->add_option("--out", s.out, "CSV path (stdout if omitted)");
  bench->add_flag("--parallel", s.parallel, "run the components of a step in parallel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return cmd_check(s, out);
    if (*bounds) return cmd_bounds(s, out, err);
    if (*theta) return cmd_theta(s, out, err);
    if (*periods) return cmd_periods(s, out, err);
    if (*embed) return cmd_embed(s, out, err);
    if (*bench) return cmd_bench(s, out, err);
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return kBudgetRefusal;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const SupportCollision& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const LimitPointSuspicion& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return kInputError;
}

}  // namespace mumford::cli
