#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hurwitz {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Proportion {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double lo = 0.0;  // Wilson interval
  double hi = 0.0;
};

/// Wilson score interval for hits / trials at quantile z.
Proportion wilson(std::uint64_t hits, std::uint64_t trials, double z = kZ99);

/// Mean and sample standard deviation, accumulated in the order given.
struct Summary {
  std::uint64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double ci_lo = 0.0;  // mean -+ z sd / sqrt(n)
  double ci_hi = 0.0;
};
Summary summarize(const std::vector<double>& values, double z = kZ99);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);
/// pass only if every verdict passes; fail dominates inconclusive.
Verdict combine(const std::vector<Verdict>& vs);

/// Does [lo, hi] meet [a, b]?
inline bool overlaps(double lo, double hi, double a, double b) { return lo <= b && a <= hi; }

}  // namespace hurwitz
