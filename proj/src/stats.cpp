#include "hurwitz/stats.hpp"

#include <algorithm>
#include <cmath>

namespace hurwitz {

Proportion wilson(std::uint64_t hits, std::uint64_t trials, double z) {
  Proportion p;
  p.hits = hits;
  p.trials = trials;
  if (trials == 0) {
    p.hi = 1.0;
    return p;
  }
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (ph + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
  p.estimate = ph;
  p.lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  p.hi = hits == trials ? 1.0 : std::min(1.0, centre + half);
  return p;
}

Summary summarize(const std::vector<double>& values, double z) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  // Welford, in index order so the result does not depend on scheduling.
  double mean = 0, m2 = 0;
  std::uint64_t k = 0;
  for (double v : values) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  s.mean = mean;
  s.sd = k > 1 ? std::sqrt(m2 / static_cast<double>(k - 1)) : 0.0;
  const double half = z * s.sd / std::sqrt(static_cast<double>(k));
  s.ci_lo = mean - half;
  s.ci_hi = mean + half;
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict combine(const std::vector<Verdict>& vs) {
  Verdict out = Verdict::pass;
  for (Verdict v : vs) {
    if (v == Verdict::fail) return Verdict::fail;
    if (v == Verdict::inconclusive) out = Verdict::inconclusive;
  }
  return out;
}

}  // namespace hurwitz
