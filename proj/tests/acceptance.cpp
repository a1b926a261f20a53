// Acceptance run: one PASS/FAIL line per criterion. Tolerances and sample
// sizes are fixed here; nothing is tuned per run.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hurwitz/census.hpp"
#include "hurwitz/errors.hpp"
#include "hurwitz/experiments.hpp"
#include "hurwitz/geometry.hpp"
#include "hurwitz/hcf.hpp"
#include "hurwitz/report.hpp"

using namespace hurwitz;

namespace {

// Pinned parameters.
constexpr std::uint64_t kSeed = 42;
constexpr int kRoundTrips = 10000;
constexpr double kRoundTripSeconds = 10.0;
constexpr int kQualitySamples = 10000;
constexpr std::size_t kQualityDepth = 30;
constexpr double kShellSeconds = 1.0;
constexpr std::uint64_t kMeasureSamples = 10000000;
constexpr double kMeasureSeconds = 300.0;
constexpr std::uint64_t kBBSamples = 100000;
constexpr unsigned kBBBits = 2048;
constexpr double kBBSeconds = 600.0;
constexpr double kBBCumulativeTarget = 0.9;
constexpr std::uint64_t kLevySamples = 1000;
constexpr std::size_t kLevyDepth = 1000;
constexpr unsigned kLevyBits = 4096;
constexpr double kLevyRelSd = 0.05;
constexpr double kLevyAgreement = 0.01;
constexpr std::uint64_t kLevySecondSeed = 4242;
constexpr std::uint64_t kKhinchinSamples = 1000;
constexpr double kKhinchinFraction = 0.9;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SampleSpec spec(std::uint64_t seed, std::uint64_t count, unsigned bits, std::size_t depth) {
  SampleSpec s;
  s.seed = seed;
  s.count = count;
  s.bits = bits;
  s.depth = depth;
  return s;
}

// Criteria 1 and 2 share the expansions.
void round_trips() {
  std::mt19937_64 rng(kSeed);
  long mismatches = 0, unterminated = 0, det_bad = 0, growth_bad = 0;
  std::size_t max_len = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < kRoundTrips; ++i) {
    // Denominators of every size up to 2^64 - 1.
    std::uint64_t den = rng() >> (rng() % 64);
    if (den == 0) den = 1;
    const BigInt d = BigInt(std::to_string(den));
    const BigInt re = BigInt(std::to_string(rng())) - BigInt(std::to_string(rng()));
    const BigInt im = BigInt(std::to_string(rng())) - BigInt(std::to_string(rng()));
    const GaussRational z = GaussRational::from_parts(re, im, d);
    const Trajectory t = hcf_expand_exact(z, 100000);
    if (!t.digit_string.terminated) ++unterminated;
    if (eval_finite(t.digit_string) != z) ++mismatches;
    max_len = std::max(max_len, t.digit_string.digits.size());

    const ConvergentSeq c = convergents(t.digit_string);
    for (long n = 0; n < static_cast<long>(c.pairs.size()); ++n) {
      const GaussInt det = c.q(n) * c.p(n - 1) - c.q(n - 1) * c.p(n);
      if (det != GaussInt(n % 2 ? -1 : 1)) ++det_bad;
      if (n > 0 && !(abs_sq(c.q(n)) > abs_sq(c.q(n - 1)))) ++growth_bad;
    }
  }
  const double secs = seconds_since(t0);
  report(1, mismatches == 0 && unterminated == 0 && secs < kRoundTripSeconds,
         std::to_string(kRoundTrips) + " rationals, denominators < 2^64: " + std::to_string(mismatches) +
             " mismatches, " + std::to_string(unterminated) + " unterminated, longest " + std::to_string(max_len) +
             " digits, " + fmt("%.2f s (incl. identity checks)", secs));
  report(2, det_bad == 0 && growth_bad == 0,
         "determinant violations " + std::to_string(det_bad) + ", |q_n| growth violations " +
             std::to_string(growth_bad));
}

void lemma_bound() {
  const SampleSpec s = spec(kSeed, kQualitySamples, 256, 128);
  long violations = 0, checked = 0, short_traj = 0;
  double worst = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < kQualitySamples; ++i) {
    const Trajectory t = hcf_expand_exact(sample_dyadic(s, static_cast<std::uint64_t>(i)), kQualityDepth + 1);
    const ConvergentSeq c = convergents(t.digit_string);
    const std::size_t avail = t.digit_string.digits.size();
    if (avail < kQualityDepth + 1) ++short_traj;
    for (std::size_t n = 0; n <= kQualityDepth && n < avail; ++n) {
      const ApproxQuality q = approx_quality(t, c, n);
      ++checked;
      if (!q.within_bound) ++violations;
      worst = std::max(worst, q.value.hi);
    }
  }
  report(3, violations == 0 && checked > 0,
         std::to_string(checked) + " indices over " + std::to_string(kQualitySamples) + " trajectories, " +
             std::to_string(violations) + " violations, max e_n " + fmt("%.6f", worst) + " < 4+2sqrt2 = " +
             fmt("%.6f", 4 + 2 * std::sqrt(2.0)) + ", short trajectories " + std::to_string(short_traj) +
             fmt(", %.1f s", seconds_since(t0)));
}

void shells() {
  const auto t0 = Clock::now();
  const Region F = canonicalize(base_region_F());
  const Region G = canonicalize(interior(cylinder_region({GaussInt(1, -1)})));
  const std::size_t f2 = shell_count(F, 2), g2 = shell_count(G, 2);
  long f_bad = 0, g_bad = 0;
  std::string g_sample;
  for (long m = 3; m <= 50; ++m) {
    if (shell_count(F, m) != static_cast<std::size_t>(8 * m)) ++f_bad;
    const std::size_t g = shell_count(G, m);
    if (g != static_cast<std::size_t>(2 * m - 1)) ++g_bad;
    if (m <= 5) g_sample += (g_sample.empty() ? "" : ",") + std::to_string(g);
  }
  const double secs = seconds_since(t0);
  report(4, f2 == 14 && g2 == 3 && f_bad == 0 && g_bad == 0 && secs < kShellSeconds,
         "F,2 -> " + std::to_string(f2) + "; int F_1(1-i),2 -> " + std::to_string(g2) + "; F,m = 8m misses " +
             std::to_string(f_bad) + "/48; int F_1(1-i),m = 2m-1 misses " + std::to_string(g_bad) +
             "/48 (m = 3,4,5 give " + g_sample + ")" + fmt("; %.3f s", secs));
}

void cylinder_facts() {
  long empty_bad = 0, full_bad = 0, irregular_bad = 0;
  for (long x = -8; x <= 8; ++x) {
    for (long y = -8; y <= 8; ++y) {
      const GaussInt a(x, y);
      const Region r = cylinder_region({a});
      const Classification c = region_classify(r);
      const bool unit_or_zero = x * x + y * y <= 1;
      if ((c.kind == Classification::Kind::empty) != unit_or_zero) ++empty_bad;
      if (!unit_or_zero && (c.kind == Classification::Kind::full_square) != (x * x + y * y >= 8)) ++full_bad;
    }
  }
  for (long n = 2; n <= 10; ++n) {
    const std::vector<GaussInt> ds{GaussInt(-1, 1), GaussInt(1, -n)};
    if (region_classify(cylinder_region(ds)).kind != Classification::Kind::degenerate || is_regular(ds))
      ++irregular_bad;
  }
  const CensusReport census = prototype_census(8);
  const bool last_level_quiet = !census.new_per_depth.empty() && census.new_per_depth.back() == 0;
  const bool classes_ok = census.depth1_classes == 4;
  report(5, empty_bad == 0 && full_bad == 0 && irregular_bad == 0 && classes_ok && census.stabilized && last_level_quiet,
         "empty exactly for 0,+-1,+-i: " + std::string(empty_bad ? "no" : "yes") + "; full square iff |a|^2>=8: " +
             (full_bad ? "no" : "yes") + "; (-1+i,1-ni) degenerate n=2..10: " + (irregular_bad ? "no" : "yes") +
             "; depth-1 interior classes excluding full square = " + std::to_string(census.depth1_classes) +
             " (expected 4; " + std::to_string(census.depth1_classes_with_full) +
             " counting the full square); census stabilized at depth " +
             std::to_string(census.stabilization_depth) + " with " + std::to_string(census.shapes.size()) + " shapes");
}

void measure_bands() {
  const auto t0 = Clock::now();
  const SampleSpec s = spec(kSeed, kMeasureSamples, 64, 32);
  bool ok = true;
  std::string detail;
  for (const GaussInt& a : {GaussInt(3), GaussInt(1, -1), GaussInt(0, 2)}) {
    const MeasureReport r = estimate_cylinder_measure({a}, s);
    ok = ok && r.verdict == Verdict::pass;
    detail += "(" + a.to_string() + ") " + fmt("%.6f", r.estimate.estimate) + " in [" + fmt("%.3g", r.band_lo) +
              ", " + fmt("%.3g", r.band_hi) + "] " + to_string(r.verdict) + "; ";
  }
  const RatioReport rr = ratio_band_check({GaussInt(3)}, {GaussInt(3), GaussInt(4, 1), GaussInt(6)}, s, {3, 5, 9});
  for (const RatioRow& row : rr.rows) {
    ok = ok && row.verdict == Verdict::pass;
    detail += "b=" + row.b.to_string() + " " + fmt("%.6f", row.ratio.estimate) + " in [" + fmt("%.3g", row.band_lo) +
              ", " + fmt("%.3g", row.band_hi) + "] " + to_string(row.verdict) + "; ";
  }
  for (const ScalingRow& sc : rr.scaling) {
    if (!(sc.b == GaussInt(6) && sc.base == GaussInt(3))) continue;
    ok = ok && sc.verdict == Verdict::pass;
    detail += "ratio(6)/ratio(3) " + fmt("%.5f", sc.ratio) + " CI [" + fmt("%.5f", sc.lo) + ", " +
              fmt("%.5f", sc.hi) + "] vs 1/16 " + to_string(sc.verdict) + "; ";
  }
  for (const LowBowRow& l : rr.lowbow) {
    ok = ok && l.verdict == Verdict::pass;
    detail += "P(||b||<=" + std::to_string(l.M) + ") " + fmt("%.5f", l.p_le.estimate) + " <= " +
              fmt("%.8f", l.bound) + " " + to_string(l.verdict) + "; ";
  }
  const double secs = seconds_since(t0);
  report(6, ok && secs <= kMeasureSeconds, detail + fmt("%.1f s", secs));
}

void zero_one() {
  const auto t0 = Clock::now();
  const SampleSpec s = spec(kSeed, kBBSamples, kBBBits, 512);
  const auto windows = dyadic_windows(4, 8);
  const std::vector<std::size_t> depths{64, 128, 256, 512};
  std::string detail;
  bool ok = true;

  const BBReport lin = bb_experiment(USequence::parse("power:1"), s, windows, depths);
  bool within = true, monotone = true;
  for (std::size_t i = 0; i < lin.windows.size(); ++i) {
    const BBWindowRow& w = lin.windows[i];
    within = within && w.modulus.lo <= w.tail_bound && w.sup.lo <= w.tail_bound;
    if (i > 0) monotone = monotone && w.modulus.estimate <= lin.windows[i - 1].modulus.estimate;
    detail += (i ? "," : "u=n windows ") + fmt("%.5f", w.modulus.estimate);
  }
  detail += fmt(" (bound at k=8 %.3g)", lin.windows.back().tail_bound);
  ok = ok && within && monotone;

  const BBReport root = bb_experiment(USequence::parse("power:0.5"), s, windows, depths);
  bool increasing = true;
  for (std::size_t i = 1; i < root.cumulative.size(); ++i)
    increasing = increasing && root.cumulative[i].modulus.hits > root.cumulative[i - 1].modulus.hits;
  const double last = root.cumulative.back().modulus.estimate;
  ok = ok && increasing && last >= kBBCumulativeTarget;
  detail += "; u=sqrt n cumulative";
  for (const auto& c : root.cumulative) detail += " " + fmt("%.5f", c.modulus.estimate);

  const BBReport flat = bb_experiment(USequence::parse("const:1.41"), s, windows, depths);
  bool ones = true;
  for (const auto& w : flat.windows) ones = ones && w.modulus.hits == w.modulus.trials;
  for (const auto& c : flat.cumulative) ones = ones && c.modulus.hits == c.modulus.trials;
  ok = ok && ones;
  detail += std::string("; u=1.41 all fractions 1: ") + (ones ? "yes" : "no");

  bool sandwich = true;
  for (const BBReport* r : {&lin, &root, &flat})
    for (const auto& w : r->windows) sandwich = sandwich && w.sandwich;
  ok = ok && sandwich;
  detail += std::string("; sandwich: ") + (sandwich ? "yes" : "no");
  const double secs = seconds_since(t0);
  report(7, ok && secs <= kBBSeconds, detail + fmt("; %.1f s", secs));
}

double levy_and_return_upper() {
  const auto t0 = Clock::now();
  const std::vector<std::size_t> cps{125, 250, 500, 1000};
  const LevyReport a = levy_estimate(spec(kSeed, kLevySamples, kLevyBits, kLevyDepth), cps);
  const LevyReport b = levy_estimate(spec(kLevySecondSeed, kLevySamples, kLevyBits, kLevyDepth), cps);
  const double rel = std::abs(a.B - b.B) / a.B;
  const double rel_sd = a.rows.back().rel_sd;
  report(8, rel_sd <= kLevyRelSd && rel <= kLevyAgreement && a.B_lo > 0 && b.B_lo > 0,
         fmt("B = %.6f", a.B) + fmt(" [%.6f,", a.B_lo) + fmt(" %.6f]", a.B_hi) + fmt(" (seed 42), %.6f", b.B) +
             " (seed " + std::to_string(kLevySecondSeed) + "), relative gap " + fmt("%.5f", rel) +
             ", relative sd at n=1000 " + fmt("%.4f", rel_sd) + fmt("; %.1f s", seconds_since(t0)));
  return std::max(a.B_hi, b.B_hi);
}

void khinchin(double b_hi) {
  const auto t0 = Clock::now();
  const double D = 1.2 * b_hi;
  const SampleSpec s = spec(kSeed, kKhinchinSamples, 2048, 512);
  const std::vector<std::size_t> cps{64, 128, 256, 512};
  const KhinchinReport two = khinchin_experiment(2.0, s, D, cps);
  const KhinchinReport three = khinchin_experiment(3.0, s, D, cps);
  const double still = 1 - three.growing.estimate;
  report(9,
         two.growing.estimate >= kKhinchinFraction && still >= kKhinchinFraction && two.violations == 0 &&
             three.violations == 0 && two.verified == two.fired && three.verified == three.fired,
         fmt("D = %.4f; ", D) + "psi=x^-2 growing " + fmt("%.4f", two.growing.estimate) + ", mean count at 512 " +
             fmt("%.2f", two.rows.back().counts.mean) + "; psi=x^-3 no growth 256->512 " + fmt("%.4f", still) +
             ", mean count " + fmt("%.3f", three.rows.back().counts.mean) + "; certificates " +
             std::to_string(two.fired + three.fired) + " fired, " + std::to_string(two.verified + three.verified) +
             " re-verified, " + std::to_string(two.violations + three.violations) + " violations" +
             fmt("; %.1f s", seconds_since(t0)));
}

void reproducibility(const char* golden_cmd) {
  // In process: every report is a pure function of (spec, seed) whatever the
  // thread count or kernel.
  const ExecPolicy one{Kernel::fast, 1}, many{Kernel::fast, 4}, ref{Kernel::reference, 1};
  const SampleSpec s = spec(kSeed, 2000, 256, 96);
  std::vector<std::function<Json(const ExecPolicy&)>> runs{
      [&](const ExecPolicy& e) { return to_json(estimate_cylinder_measure({GaussInt(3)}, s, e)); },
      [&](const ExecPolicy& e) { return to_json(ratio_band_check({GaussInt(3)}, {GaussInt(3)}, s, {3}, e)); },
      [&](const ExecPolicy& e) {
        return to_json(bb_experiment(USequence::parse("power:0.5"), s, dyadic_windows(3, 5), {32, 64}, 16, e));
      },
      [&](const ExecPolicy& e) { return to_json(levy_estimate(s, {48, 96}, e)); },
      [&](const ExecPolicy& e) { return to_json(khinchin_experiment(2.0, s, 1.4, {48, 96}, e)); }};
  long diffs = 0;
  for (const auto& r : runs) {
    const std::string base = dump_canonical(r(one));
    for (const ExecPolicy* e : {&one, &many, &ref}) diffs += dump_canonical(r(*e)) == base ? 0 : 1;
  }
  const int golden = std::system(golden_cmd);
  report(10, diffs == 0 && golden == 0,
         "in-process reports differing across runs/threads/kernels: " + std::to_string(diffs) +
             "; CLI golden suite (1 vs 4 threads, repeated): " + (golden == 0 ? "identical" : "DIFFERENT"));
}

}  // namespace

int main() {
  std::printf("acceptance run, seed %llu, %d OpenMP threads\n", static_cast<unsigned long long>(kSeed),
              omp_get_max_threads());
  try {
    round_trips();
    lemma_bound();
    shells();
    cylinder_facts();
    measure_bands();
    zero_one();
    const double b_hi = levy_and_return_upper();
    khinchin(b_hi);
    reproducibility(HURWITZ_GOLDEN_CMD " > /dev/null");
  } catch (const Error& e) {
    std::printf("aborted: %s\n", e.what());
    return 3;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
