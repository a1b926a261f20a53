#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hurwitz/ball.hpp"
#include "hurwitz/census.hpp"
#include "hurwitz/errors.hpp"
#include "hurwitz/experiments.hpp"
#include "hurwitz/geometry.hpp"
#include "hurwitz/hcf.hpp"
#include "hurwitz/report.hpp"

using namespace hurwitz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;
constexpr int kExitInternal = 3;

struct Common {
  std::uint64_t seed = 42;
  std::uint64_t count = 0;  // 0: the subcommand's default
  int bits = 0;
  std::size_t depth = 0;
  std::string format = "json";
  std::string output;
  int threads = 0;
  std::string kernel = "fast";
};

struct Defaults {
  std::uint64_t count;
  int bits;
  std::size_t depth;
};

struct Outcome {
  Json config;
  Json result;
  std::string verdict = "ok";
  std::optional<Table> table;
  std::optional<std::string> svg;
};

SampleSpec resolve(const Common& c, Defaults d) {
  SampleSpec s;
  s.seed = c.seed;
  s.count = c.count ? c.count : d.count;
  s.bits = c.bits ? c.bits : d.bits;
  s.depth = c.depth ? c.depth : d.depth;
  s.validate();
  return s;
}

ExecPolicy exec_of(const Common& c) {
  return {c.kernel == "reference" ? Kernel::reference : Kernel::fast, c.threads};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

/// "a1,a2,..." (possibly empty).
std::vector<GaussInt> parse_digit_list(const std::string& text) {
  std::vector<GaussInt> out;
  if (trim(text).empty()) return out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_gauss_int(trim(part)));
  return out;
}

/// "a0;a1,a2,..." or "a1,a2,..." (a0 = 0).
DigitString parse_digit_string(const std::string& text) {
  DigitString d;
  const auto semi = text.find(';');
  if (semi == std::string::npos) {
    d.digits = parse_digit_list(text);
  } else {
    d.a0 = parse_gauss_int(trim(text.substr(0, semi)));
    d.digits = parse_digit_list(text.substr(semi + 1));
  }
  return d;
}

template <class T>
std::vector<T> parse_number_list(const std::string& text) {
  std::vector<T> out;
  for (const std::string& part : split(text, ',')) {
    const std::string t = trim(part);
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (t.empty() || pos != t.size()) throw InvalidArgument("'" + t + "' is not an integer");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

Json region_result(const Region& r) {
  const Classification c = region_classify(r);
  Json j = to_json(r);
  j["classification"] = to_string(c.kind);
  j["area"] = to_json(region_area(r));
  return j;
}

/// "F", "int:F", "a1,a2" or "int:a1,a2".
Region parse_region(const std::string& text) {
  std::string body = trim(text);
  bool open = false;
  if (body.rfind("int:", 0) == 0) {
    open = true;
    body = body.substr(4);
  }
  Region r = body == "F" ? canonicalize(base_region_F()) : cylinder_region(parse_digit_list(body));
  return open ? canonicalize(interior(r)) : r;
}

std::string verdict_of(Verdict v) { return to_string(v); }

// ---------------------------------------------------------------------------

Outcome run_expand(const Common& c, const std::string& z_text, bool ball, int radius_exp) {
  const GaussRational z = parse_complex(z_text);
  Outcome o;
  const std::size_t depth = c.depth ? c.depth : kDefaultMaxDepth;
  o.config = Json{{"z", z_text}, {"z_exact", to_json(z)}, {"mode", ball ? "ball" : "exact"}, {"depth", depth}};
  if (!ball) {
    const Trajectory t = hcf_expand_exact(z, depth);
    o.result = to_json(t.digit_string);
    return o;
  }
  const int bits = c.bits ? c.bits : 128;
  o.config["bits"] = bits;
  o.config["radius_exp"] = radius_exp;
  const Dyadic extra = radius_exp > 0 ? Dyadic(BigInt(1), -static_cast<long>(radius_exp)) : Dyadic();
  const BallExpansion e = hcf_expand_ball(ComplexBall::around(z, bits, extra), depth);
  const char* status = e.status == BallExpansion::Status::ok                ? "ok"
                       : e.status == BallExpansion::Status::digit_uncertain ? "digit_uncertain"
                                                                              : "zero_straddle";
  o.result = Json{{"status", status}, {"certified", to_json(e.digits)}, {"failed_at_step", e.step}};
  return o;
}

Outcome run_eval(const std::string& digits) {
  const DigitString d = parse_digit_string(digits);
  Outcome o;
  o.config = Json{{"digits", digits}};
  const GaussRational v = eval_finite(d);
  o.result = Json{{"value", to_json(v)}, {"text", v.to_string()}};
  return o;
}

Outcome run_convergents(const std::string& digits) {
  const DigitString d = parse_digit_string(digits);
  const ConvergentSeq cs = convergents(d);
  Outcome o;
  o.config = Json{{"digits", digits}};
  Json rows = Json::array();
  Table t{{"n", "p", "q", "abs_sq_q"}, {}};
  for (std::size_t n = 0; n < cs.pairs.size(); ++n) {
    const Convergent& pq = cs.pairs[n];
    const BigInt nq = pq.q.re * pq.q.re + pq.q.im * pq.q.im;
    rows.push_back(Json{{"n", n}, {"p", to_json(pq.p)}, {"q", to_json(pq.q)}, {"abs_sq_q", nq.get_str()}});
    t.rows.push_back({std::to_string(n), pq.p.to_string(), pq.q.to_string(), nq.get_str()});
  }
  o.result = Json{{"convergents", rows}};
  o.table = std::move(t);
  return o;
}

Outcome run_quality(const Common& c, const std::string& z_text) {
  const GaussRational z = parse_complex(z_text);
  const std::size_t depth = c.depth ? c.depth : kDefaultMaxDepth;
  const Trajectory t = hcf_expand_exact(z, depth);
  const ConvergentSeq cs = convergents(t.digit_string);
  Outcome o;
  o.config = Json{{"z", z_text}, {"z_exact", to_json(z)}, {"depth", depth}};
  Json rows = Json::array();
  Table tab{{"n", "e_lo", "e_hi", "within_bound"}, {}};
  double max_hi = 0.0;
  bool all_within = true;
  const std::size_t n_digits = t.digit_string.digits.size();
  for (std::size_t n = 0; n < n_digits; ++n) {
    const ApproxQuality q = approx_quality(t, cs, n);
    max_hi = std::max(max_hi, q.value.hi);
    all_within = all_within && q.within_bound;
    rows.push_back(Json{{"n", n}, {"e", to_json(q.value)}, {"within_bound", q.within_bound}});
    tab.rows.push_back({std::to_string(n), format_double(q.value.lo), format_double(q.value.hi),
                        q.within_bound ? "true" : "false"});
  }
  o.result = Json{{"digits", to_json(t.digit_string)},
                  {"bound", "4 + 2 sqrt 2"},
                  {"rows", rows},
                  {"max_e_hi", max_hi},
                  {"all_within_bound", all_within}};
  o.verdict = all_within ? "pass" : "fail";
  o.table = std::move(tab);
  return o;
}

Outcome run_cylinder(const std::string& digits) {
  const std::vector<GaussInt> ds = parse_digit_list(digits);
  Outcome o;
  o.config = Json{{"digits", digits}};
  const Region r = cylinder_region(ds);
  o.result = region_result(r);
  bool admissible = true;
  for (const GaussInt& g : ds) admissible = admissible && g.re * g.re + g.im * g.im >= 2;
  o.result["admissible"] = admissible;
  o.result["regular"] = admissible && is_regular(ds);
  if (admissible) {
    DigitString d;
    d.digits = ds;
    const ConvergentSeq cs = convergents(d);
    o.result["q_n"] = to_json(cs.pairs.back().q);
    o.result["p_n"] = to_json(cs.pairs.back().p);
  }
  return o;
}

Outcome run_census(std::size_t depth, std::size_t cap, long radius) {
  Outcome o;
  o.config = Json{{"max_depth", depth}, {"cap", cap}, {"digit_radius", radius}};
  const CensusReport r = prototype_census(depth, cap, radius);
  o.result = to_json(r);
  o.table = to_table(r);
  o.svg = census_svg(r);
  return o;
}

Outcome run_shells(const std::string& region, const std::vector<long>& ms) {
  Outcome o;
  o.config = Json{{"region", region}, {"m", ms}};
  const Region r = parse_region(region);
  Json rows = Json::array();
  Table t{{"m", "count"}, {}};
  for (long m : ms) {
    if (m < 1) throw InvalidArgument("m must be >= 1");
    const std::size_t n = shell_count(r, m);
    rows.push_back(Json{{"m", m}, {"count", n}});
    t.rows.push_back({std::to_string(m), std::to_string(n)});
  }
  o.result = Json{{"region", to_json(r)}, {"shells", rows}};
  if (ms.size() == 1) o.result["count"] = rows[0]["count"];
  o.table = std::move(t);
  return o;
}

Outcome run_measure(const Common& c, const std::string& digits) {
  const SampleSpec spec = resolve(c, {1000000, 64, 32});
  Outcome o;
  o.config = Json{{"digits", digits}, {"sample", to_json(spec)}};
  const MeasureReport r = estimate_cylinder_measure(parse_digit_list(digits), spec, exec_of(c));
  o.result = to_json(r);
  o.verdict = verdict_of(r.verdict);
  o.table = to_table(r);
  return o;
}

Outcome run_ratio(const Common& c, const std::string& prefix, const std::string& next, const std::string& lowbow) {
  const SampleSpec spec = resolve(c, {1000000, 64, 32});
  const std::vector<long> ms = trim(lowbow).empty() ? std::vector<long>{} : parse_number_list<long>(lowbow);
  Outcome o;
  o.config = Json{{"prefix", prefix}, {"next", next}, {"lowbow", ms}, {"sample", to_json(spec)}};
  const RatioReport r =
      ratio_band_check(parse_digit_list(prefix), parse_digit_list(next), spec, ms, exec_of(c));
  o.result = to_json(r);
  o.verdict = verdict_of(r.verdict);
  o.table = to_table(r);
  return o;
}

Outcome run_bb(const Common& c, const std::string& u_text, int k_lo, int k_hi, const std::string& cumulative,
               std::size_t from) {
  const SampleSpec spec = resolve(c, {100000, 2048, 512});
  const USequence u = USequence::parse(u_text);
  const auto depths = parse_number_list<std::size_t>(cumulative);
  Outcome o;
  o.config = Json{{"u", u.to_string()},  {"window_k_lo", k_lo}, {"window_k_hi", k_hi},
                  {"cumulative", depths}, {"from", from},       {"sample", to_json(spec)}};
  const BBReport r = bb_experiment(u, spec, dyadic_windows(k_lo, k_hi), depths, from, exec_of(c));
  o.result = to_json(r);
  o.verdict = verdict_of(r.verdict);
  o.table = to_table(r);
  return o;
}

Outcome run_levy(const Common& c, const std::string& checkpoints) {
  const SampleSpec spec = resolve(c, {1000, 4096, 1000});
  const auto cps = parse_number_list<std::size_t>(checkpoints);
  Outcome o;
  o.config = Json{{"checkpoints", cps}, {"sample", to_json(spec)}};
  const LevyReport r = levy_estimate(spec, cps, exec_of(c));
  o.result = to_json(r);
  o.verdict = verdict_of(r.verdict);
  o.table = to_table(r);
  return o;
}

Outcome run_khinchin(const Common& c, double beta, std::optional<double> big_D, const std::string& checkpoints) {
  const SampleSpec spec = resolve(c, {1000, 2048, 512});
  const auto cps = parse_number_list<std::size_t>(checkpoints);
  Outcome o;
  o.config = Json{{"beta", beta}, {"checkpoints", cps}, {"sample", to_json(spec)}};
  double D = 0.0;
  if (big_D) {
    D = *big_D;
    o.config["big_D"] = Json{{"value", D}, {"source", "given"}};
  } else {
    // 1.2 times the upper confidence bound of B from a Levy run on the same seed.
    SampleSpec ls = spec;
    ls.count = std::min<std::uint64_t>(spec.count, 1000);
    const LevyReport lv = levy_estimate(ls, {spec.depth}, exec_of(c));
    D = 1.2 * lv.B_hi;
    o.config["big_D"] = Json{{"value", D},
                             {"source", "1.2 x upper CI of B"},
                             {"levy_count", ls.count},
                             {"levy_B", lv.B},
                             {"levy_B_hi", lv.B_hi}};
  }
  const KhinchinReport r = khinchin_experiment(beta, spec, D, cps, exec_of(c));
  o.result = to_json(r);
  o.verdict = verdict_of(r.verdict);
  o.table = to_table(r);
  return o;
}

int exit_for(const std::string& verdict) { return verdict == "fail" ? kExitFail : kExitOk; }

void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open output file '" + c.output + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hurwitz-lab: exact Hurwitz complex continued fractions and seeded metric experiments"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common c;
  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    sub->add_option("--count", c.count, "Number of samples (0: subcommand default)");
    sub->add_option("--bits", c.bits, "Dyadic sample precision, or ball precision for expand")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--depth", c.depth, "Maximum digits per expansion/sample");
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "svg"}))
        ->capture_default_str();
    sub->add_option("--output,-o", c.output, "Output path (default: standard output)");
    sub->add_option("--threads", c.threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--kernel", c.kernel, "Sampling kernel")
        ->check(CLI::IsMember({"fast", "reference"}))
        ->capture_default_str();
  };

  std::string z, digits, region = "F", prefix = "3", next = "3,4+i,6", lowbow = "3,5,9";
  std::string u = "power:1", cumulative = "64,128,256,512";
  std::string levy_checkpoints = "125,250,500,1000", khinchin_checkpoints = "64,128,256,512";
  std::string m_list = "2";
  bool ball = false;
  int radius_exp = 0, k_lo = 4, k_hi = 8;
  std::size_t census_depth = 8, census_cap = 4096, from = 16;
  long census_radius = 6;
  double beta = 2.0, big_D_value = 0.0;

  auto* expand = app.add_subcommand("expand", "Hurwitz expansion of a complex rational (exact or ball)");
  expand->add_option("--z", z, "Complex literal RE[+|-]IMi, parts integer or p/q")->required();
  expand->add_flag("--ball", ball, "Certified ball expansion of the rounded input");
  expand->add_option("--radius-exp", radius_exp, "Extra ball radius 2^-E (0: rounding only)");
  add_common(expand);

  auto* eval = app.add_subcommand("eval", "Exact value of a finite continued fraction");
  eval->add_option("--digits", digits, "Digits 'a0;a1,a2,...'")->required();
  add_common(eval);

  auto* conv = app.add_subcommand("convergents", "Convergents p_n, q_n of a digit string");
  conv->add_option("--digits", digits, "Digits 'a0;a1,a2,...'")->required();
  add_common(conv);

  auto* quality = app.add_subcommand("quality", "Certified scaled errors e_n = |z - p_n/q_n| |a_{n+1}| |q_n|^2");
  quality->add_option("--z", z, "Complex literal")->required();
  add_common(quality);

  auto* cyl = app.add_subcommand("cylinder", "Region F_n(a), classification and area");
  cyl->add_option("--digits", digits, "Digits 'a1,a2,...' (empty: F)")->required();
  add_common(cyl);

  auto* census = app.add_subcommand("census", "Breadth-first census of cylinder shapes");
  census->add_option("--max-depth", census_depth, "Deepest digit string")->capture_default_str();
  census->add_option("--cap", census_cap, "Abort beyond this many shapes")->capture_default_str();
  census->add_option("--radius", census_radius, "Sup-norm bound on digits")->capture_default_str();
  add_common(census);

  auto* shells = app.add_subcommand("shells", "#{b : ||b|| = m, b in inv(region)}");
  shells->add_option("--region", region, "'F', 'a1,a2,...' or either prefixed by 'int:'")->capture_default_str();
  shells->add_option("--m", m_list, "Shell index, or a comma list")->capture_default_str();
  add_common(shells);

  auto* measure = app.add_subcommand("measure", "Monte Carlo measure of the cylinder C_n(a)");
  measure->add_option("--digits", digits, "Digits 'a1,a2,...'")->required();
  add_common(measure);

  auto* ratio = app.add_subcommand("ratio", "Conditional next-digit probabilities after a prefix");
  ratio->add_option("--prefix", prefix, "Prefix 'a1,...'")->capture_default_str();
  ratio->add_option("--next", next, "Next digits to tally")->capture_default_str();
  ratio->add_option("--lowbow", lowbow, "Sup-norm thresholds M ('' to skip)")->capture_default_str();
  add_common(ratio);

  auto* bb = app.add_subcommand("bb", "Zero-one law for |a_n| >= u_n");
  bb->add_option("--u", u, "power:ALPHA, const:C or list:U1,U2,...")->capture_default_str();
  bb->add_option("--k-lo", k_lo, "First window (2^k, 2^(k+1)]")->capture_default_str();
  bb->add_option("--k-hi", k_hi, "Last window")->capture_default_str();
  bb->add_option("--cumulative", cumulative, "Depths for cumulative fractions")->capture_default_str();
  bb->add_option("--from", from, "First index counted in cumulative fractions")->capture_default_str();
  add_common(bb);

  auto* levy = app.add_subcommand("levy", "Growth rate (1/n) log|q_n|");
  levy->add_option("--checkpoints", levy_checkpoints, "Depths n")->capture_default_str();
  add_common(levy);

  auto* khinchin = app.add_subcommand("khinchin", "Certified psi-approximations, psi(x) = x^-beta");
  khinchin->add_option("--beta", beta, "Exponent (2 beta integer)")->capture_default_str();
  auto* d_opt = khinchin->add_option("--big-d", big_D_value, "D > B (default 1.2 x upper CI of B)");
  khinchin->add_option("--checkpoints", khinchin_checkpoints, "Depths")->capture_default_str();
  add_common(khinchin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  if (c.threads > 0) omp_set_num_threads(c.threads);
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    if (name == "expand") o = run_expand(c, z, ball, radius_exp);
    else if (name == "eval") o = run_eval(digits);
    else if (name == "convergents") o = run_convergents(digits);
    else if (name == "quality") o = run_quality(c, z);
    else if (name == "cylinder") o = run_cylinder(digits);
    else if (name == "census") o = run_census(census_depth, census_cap, census_radius);
    else if (name == "shells") o = run_shells(region, parse_number_list<long>(m_list));
    else if (name == "measure") o = run_measure(c, digits);
    else if (name == "ratio") o = run_ratio(c, prefix, next, lowbow);
    else if (name == "bb") o = run_bb(c, u, k_lo, k_hi, cumulative, from);
    else if (name == "levy") o = run_levy(c, levy_checkpoints);
    else if (name == "khinchin")
      o = run_khinchin(c, beta, d_opt->count() ? std::optional<double>(big_D_value) : std::nullopt,
                       khinchin_checkpoints);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (c.format == "svg") {
      if (!o.svg) throw InvalidArgument("--format svg is only available for census");
      emit(c, *o.svg);
    } else if (c.format == "csv") {
      if (!o.table) throw InvalidArgument("--format csv is not available for " + name);
      emit(c, to_csv(*o.table));
    } else {
      o.config["format"] = c.format;
      Json env = envelope(name, std::move(o.config), std::move(o.result), o.verdict, wall, omp_get_max_threads());
      env["metadata"]["kernel"] = c.kernel;
      emit(c, dump_canonical(env));
    }
    return exit_for(o.verdict);
  } catch (const UnsupportedConstraint& e) {
    std::cerr << "UnsupportedConstraint: " << e.what() << "\n";
    return kExitInternal;
  } catch (const InvariantViolation& e) {
    std::cerr << "InvariantViolation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const BudgetExceeded& e) {
    std::cerr << "BudgetExceeded: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  }
}
