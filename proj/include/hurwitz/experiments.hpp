#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hurwitz/exact.hpp"
#include "hurwitz/gaussian.hpp"
#include "hurwitz/random.hpp"
#include "hurwitz/stats.hpp"

namespace hurwitz {

/// fast: OpenMP over samples, streamed digits with a floating rounding
/// shortcut. reference: one thread, every digit from the exact rational
/// expansion. Both produce identical reports.
enum class Kernel { fast, reference };

struct ExecPolicy {
  Kernel kernel = Kernel::fast;
  int threads = 0;  // 0: OpenMP default
};

/// Explicit constants behind the measure bands. Each carries its closed form
/// and a certified enclosure.
struct DerivedConstants {
  ExactConstant kappa1;  // (2 - sqrt 2) / 4
  ExactConstant kappa;   // 4 + 2 sqrt 2
  ExactConstant kappa2;  // distance from inv(closure F) to the closed unit disk
  ExactConstant kappa3;  // 4 (sqrt 2 - 1)^-4
  ExactConstant jac_lo;  // 2^-4
  ExactConstant jac_hi;  // (1 - 1/sqrt 2)^-4
  ExactConstant a_min;   // smallest area of a regular shape, area F_1(1 - i)
  ExactConstant c_tail;  // 24 jac_hi / (jac_lo a_min)
  ExactConstant c_bb;    // jac_lo a_min / (2 jac_hi (sqrt 2 + 1/2)^4)

  static const DerivedConstants& get();
};

// ---------------------------------------------------------------------------

struct MeasureReport {
  std::vector<GaussInt> digits;
  SampleSpec spec;
  Proportion estimate;
  std::uint64_t exhausted = 0;
  double area = 0.0;       // area of F_n(a)
  double q_abs = 0.0;      // |q_n|
  double band_lo = 0.0;    // jac_lo area / |q_n|^4
  double band_hi = 0.0;    // jac_hi area / |q_n|^4
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

/// Fraction of uniform samples of F whose first digits equal `digits`.
MeasureReport estimate_cylinder_measure(const std::vector<GaussInt>& digits, const SampleSpec& spec,
                                        const ExecPolicy& exec = {});

struct RatioRow {
  GaussInt b;
  Proportion ratio;        // P(next digit = b | prefix)
  double area_next = 0.0;  // area F_{n+1}(a b)
  double band_lo = 0.0;
  double band_hi = 0.0;
  double simple_lo = 0.0;  // 1 / (2^4 |b|^4)
  double simple_hi = 0.0;  // kappa3 / |b|^4
  Verdict verdict = Verdict::inconclusive;
};

struct ScalingRow {
  GaussInt b;
  GaussInt base;
  double ratio = 0.0;      // ratio(b) / ratio(base)
  double lo = 0.0;         // 99% interval
  double hi = 0.0;
  double predicted = 0.0;  // (|base| / |b|)^4
  Verdict verdict = Verdict::inconclusive;
};

struct LowBowRow {
  long M = 0;
  Proportion p_le;     // P(||b|| <= M | prefix)
  double bound = 0.0;  // 1 - c_bb / (M + 1)^2
  Verdict verdict = Verdict::inconclusive;
};

struct RatioReport {
  std::vector<GaussInt> prefix;
  SampleSpec spec;
  std::uint64_t draws = 0;
  std::uint64_t in_prefix = 0;
  std::uint64_t exhausted = 0;
  double area_prefix = 0.0;
  std::vector<RatioRow> rows;
  std::vector<ScalingRow> scaling;  // each b against the first one
  std::vector<LowBowRow> lowbow;
  Verdict verdict = Verdict::inconclusive;
};

/// Draws uniform points from a dyadic box around C_n(a) (spec.count draws),
/// keeps those in C_n(a) and tallies the next digit. Throws InvalidDigit for
/// |b|^2 < 2 and InvalidArgument for an irregular prefix.
RatioReport ratio_band_check(const std::vector<GaussInt>& prefix, const std::vector<GaussInt>& next,
                             const SampleSpec& spec, const std::vector<long>& lowbow_M = {},
                             const ExecPolicy& exec = {});

// ---------------------------------------------------------------------------

/// Threshold sequence u_n, n >= 1.
struct USequence {
  enum class Kind { power, constant, list };
  Kind kind = Kind::power;
  double param = 1.0;
  std::vector<double> values;  // list: u_1, u_2, ...; the last value repeats

  /// "power:0.5", "const:1.41", "list:2,3,5".
  static USequence parse(std::string_view text);
  std::string to_string() const;
  double value(std::size_t n) const;
  /// u_n^2; exact for power 1/2 and 1 with integer n.
  long double squared(std::size_t n) const;
  /// Does sum u_n^-2 converge?
  bool series_converges() const;
};

struct Window {
  std::size_t lo = 0;  // (lo, hi]
  std::size_t hi = 0;
};

struct BBWindowRow {
  Window w;
  Proportion modulus;      // |a_n| >= u_n for some n in the window
  Proportion sup;          // ||a_n|| >= u_n
  Proportion sup_relaxed;  // ||a_n|| >= u_n / sqrt 2
  double tail_bound = 0.0; // sum c_tail / (u_n - 1)^2 over the window
  bool sandwich = true;    // sup <= modulus <= sup_relaxed
};

struct BBCumulativeRow {
  std::size_t depth = 0;
  Proportion modulus;  // some n in [from, depth]
  Proportion sup;
};

struct BBReport {
  USequence u;
  SampleSpec spec;
  std::size_t cumulative_from = 16;
  std::vector<BBWindowRow> windows;
  std::vector<BBCumulativeRow> cumulative;
  std::uint64_t exhausted = 0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> checks;  // one line per verdict component
};

/// Windows (2^k, 2^(k+1)] for k_lo <= k <= k_hi.
std::vector<Window> dyadic_windows(int k_lo, int k_hi);

BBReport bb_experiment(const USequence& u, const SampleSpec& spec, const std::vector<Window>& windows,
                       const std::vector<std::size_t>& cumulative_depths, std::size_t cumulative_from = 16,
                       const ExecPolicy& exec = {});

// ---------------------------------------------------------------------------

struct LevyRow {
  std::size_t n = 0;
  Summary stats;  // of (1/n) log|q_n|
  double rel_sd = 0.0;
  std::uint64_t exhausted = 0;
};

struct LevyReport {
  SampleSpec spec;
  std::vector<LevyRow> rows;
  double B = 0.0;
  double B_lo = 0.0;
  double B_hi = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> checks;
};

/// Throws InvalidArgument on an empty list, a zero checkpoint or one past
/// spec.depth.
LevyReport levy_estimate(const SampleSpec& spec, const std::vector<std::size_t>& checkpoints,
                         const ExecPolicy& exec = {});

// ---------------------------------------------------------------------------

struct KhinchinRow {
  std::size_t depth = 0;
  Summary counts;  // certified approximations with 1 <= n < depth
};

struct KhinchinReport {
  double beta = 2.0;  // psi(x) = x^-beta
  SampleSpec spec;
  double big_D = 0.0;
  std::vector<KhinchinRow> rows;
  Proportion growing;  // count rose between the last two checkpoints
  Proportion q_bound;  // log|q_n| < D n at the final depth
  std::uint64_t fired = 0;
  std::uint64_t verified = 0;
  std::uint64_t violations = 0;
  std::uint64_t exhausted = 0;
  std::vector<std::pair<std::size_t, double>> series;  // partial sums of n^3 psi(n)^2
  bool divergent = true;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> checks;
};

/// Counts indices where kappa / |a_{n+1}| <= |q_n|^2 psi(|q_n|) and re-checks
/// each one directly against |z - p_n/q_n| <= psi(|q_n|). 2 beta must be an
/// integer so both tests stay exact.
KhinchinReport khinchin_experiment(double beta, const SampleSpec& spec, double big_D,
                                   const std::vector<std::size_t>& checkpoints, const ExecPolicy& exec = {});

}  // namespace hurwitz
