#include "hurwitz/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "hurwitz/digit_kernel.hpp"
#include "hurwitz/geometry.hpp"
#include "hurwitz/hcf.hpp"

namespace hurwitz {

namespace {

constexpr std::uint64_t kMinHits = 100;

// Digits and convergents of one sample, from either kernel.
class Walker {
 public:
  explicit Walker(Kernel k) : kernel_(k), stream_(true) {}

  void reset(const mpz_class& j, const mpz_class& k, unsigned bits, std::size_t depth) {
    conv_.reset();
    p_ = GaussInt(0);
    q_ = GaussInt(1);
    p1_ = GaussInt(1);
    q1_ = GaussInt(0);
    if (kernel_ == Kernel::fast) {
      stream_.reset_dyadic(j, k, bits);
      return;
    }
    mpz_class den;
    mpz_setbit(den.get_mpz_t(), bits);
    digits_ = hcf_expand_exact(GaussRational::from_parts(j, k, den), depth).digit_string.digits;
    pos_ = 0;
  }

  // False when the expansion has ended (or a digit leaves machine range).
  bool next(SmallDigit& d) {
    if (kernel_ == Kernel::fast) return stream_.next(d) == DigitStream::Step::digit;
    if (pos_ >= digits_.size()) return false;
    const GaussInt& g = digits_[pos_++];
    static const BigInt limit = BigInt(1) << 62;
    if (abs(g.re) >= limit || abs(g.im) >= limit) return false;
    d.re = g.re.get_si();
    d.im = g.im.get_si();
    return true;
  }

  void push(const SmallDigit& d) {
    if (kernel_ == Kernel::fast) {
      conv_.push(d);
      return;
    }
    const GaussInt a = d.to_gauss();
    GaussInt p = a * p_ + p1_, q = a * q_ + q1_;
    p1_ = std::move(p_);
    q1_ = std::move(q_);
    p_ = std::move(p);
    q_ = std::move(q);
  }

  double log_abs_q() const { return kernel_ == Kernel::fast ? conv_.log_abs_q() : log_abs(q_.re, q_.im); }
  const mpz_class& p_re() const { return kernel_ == Kernel::fast ? conv_.p_re() : p_.re; }
  const mpz_class& p_im() const { return kernel_ == Kernel::fast ? conv_.p_im() : p_.im; }
  const mpz_class& q_re() const { return kernel_ == Kernel::fast ? conv_.q_re() : q_.re; }
  const mpz_class& q_im() const { return kernel_ == Kernel::fast ? conv_.q_im() : q_.im; }

 private:
  Kernel kernel_;
  DigitStream stream_;
  ConvergentStream conv_;
  std::vector<GaussInt> digits_;
  std::size_t pos_ = 0;
  GaussInt p_, q_, p1_, q1_;
};

struct Counts {
  std::vector<std::uint64_t> v;
  explicit Counts(std::size_t n = 0) : v(n, 0) {}
  Counts& operator+=(const Counts& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
  }
};

int thread_count(const ExecPolicy& exec) {
  if (exec.kernel == Kernel::reference) return 1;
  return exec.threads > 0 ? exec.threads : omp_get_max_threads();
}

// Runs body(index, walker, local) over [0, count) and sums the integer
// tallies. Integer sums do not depend on the schedule.
template <class Body>
Counts tally(std::uint64_t count, std::size_t width, const ExecPolicy& exec, Body body) {
  Counts total(width);
  if (exec.kernel == Kernel::reference) {
    Walker w(Kernel::reference);
    for (std::uint64_t i = 0; i < count; ++i) body(i, w, total);
    return total;
  }
  std::exception_ptr failure;
#pragma omp parallel num_threads(thread_count(exec))
  {
    Counts local(width);
    Walker w(Kernel::fast);
#pragma omp for schedule(dynamic, 64)
    for (std::uint64_t i = 0; i < count; ++i) {
      try {
        body(i, w, local);
      } catch (...) {
#pragma omp critical(hurwitz_tally_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(hurwitz_tally_merge)
    total += local;
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

// Same loop for bodies that fill per-sample slots themselves.
template <class Body>
void for_samples(std::uint64_t count, const ExecPolicy& exec, Body body) {
  tally(count, 0, exec, [&](std::uint64_t i, Walker& w, Counts&) { body(i, w); });
}

bool same(const SmallDigit& d, const GaussInt& g) { return g.re == d.re && g.im == d.im; }

double abs_d(const GaussInt& g) { return std::sqrt(abs_sq(g).get_d()); }

ConvergentSeq prefix_convergents(const std::vector<GaussInt>& digits) {
  DigitString ds;
  ds.digits = digits;
  return convergents(ds);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_depths(const SampleSpec& spec, std::size_t need) {
  spec.validate();
  if (need > spec.depth) throw InvalidArgument("requested index exceeds depth " + std::to_string(spec.depth));
}

}  // namespace

// ---------------------------------------------------------------------------

const DerivedConstants& DerivedConstants::get() {
  static const DerivedConstants c = [] {
    DerivedConstants d;
    const Interval s2 = Interval::sqrt2();
    const Interval one = Interval::point(1), two = Interval::point(2), four = Interval::point(4);
    d.kappa1 = {"(2 - sqrt 2) / 4", (two - s2) / four};
    d.kappa = {"4 + 2 sqrt 2", four + two * s2};
    // The nearest points of inv(closure F) to 0 are +-1 +- i (|w| = sqrt 2),
    // where two of the excluded unit circles meet.
    d.kappa2 = {"sqrt 2 - 1", s2 - one};
    d.kappa3 = {"4 (sqrt 2 - 1)^-4", four / pow_int(s2 - one, 4)};
    d.jac_lo = {"2^-4", Interval::point(0.0625)};
    d.jac_hi = {"(1 - 1/sqrt 2)^-4", one / pow_int(one - one / s2, 4)};
    d.a_min = {"area F_1(1 - i)", region_area(cylinder_region({GaussInt(1, -1)}))};
    // P(||a_{k+1}|| >= u | C_k) <= sum_{m >= u} 8m K / (m - 1)^4 <= 24 K / (u - 1)^2
    // with K = jac_hi / (jac_lo a_min), for u >= 3.
    d.c_tail = {"24 jac_hi / (jac_lo a_min)", Interval::point(24) * d.jac_hi.value / (d.jac_lo.value * d.a_min.value)};
    // P(||b|| > M | C_k) >= (jac_lo a_min / jac_hi) sum_{m > M} (2m - 1) / (sqrt 2 m + 1)^4
    //                    >= jac_lo a_min / (2 jac_hi (sqrt 2 + 1/2)^4 (M + 1)^2).
    d.c_bb = {"jac_lo a_min / (2 jac_hi (sqrt 2 + 1/2)^4)",
              d.jac_lo.value * d.a_min.value /
                  (two * d.jac_hi.value * pow_int(s2 + Interval::point(0.5), 4))};
    return d;
  }();
  return c;
}

// ---------------------------------------------------------------------------

MeasureReport estimate_cylinder_measure(const std::vector<GaussInt>& digits, const SampleSpec& spec,
                                        const ExecPolicy& exec) {
  check_depths(spec, digits.size());
  const DerivedConstants& k = DerivedConstants::get();
  MeasureReport rep;
  rep.digits = digits;
  rep.spec = spec;
  const std::size_t n = digits.size();

  const Counts c = tally(spec.count, 2, exec, [&](std::uint64_t i, Walker& w, Counts& t) {
    if (n == 0) {
      ++t.v[0];
      return;
    }
    mpz_class j, kk;
    sample_dyadic(spec, i, j, kk);
    w.reset(j, kk, spec.bits, n);
    SmallDigit d;
    for (std::size_t s = 0; s < n; ++s) {
      if (!w.next(d)) {
        ++t.v[1];
        return;
      }
      if (!same(d, digits[s])) return;
    }
    ++t.v[0];
  });
  rep.exhausted = c.v[1];
  rep.estimate = wilson(c.v[0], spec.count - rep.exhausted);

  const Region r = cylinder_region(digits);
  const Classification::Kind kind = region_classify(r).kind;
  if (n == 0) {
    rep.area = 1.0;
    rep.q_abs = 1.0;
    rep.band_lo = rep.band_hi = 1.0;
    rep.verdict = rep.estimate.estimate == 1.0 ? Verdict::pass : Verdict::fail;
    return rep;
  }
  if (kind == Classification::Kind::empty || kind == Classification::Kind::degenerate) {
    rep.note = kind == Classification::Kind::empty ? "empty cylinder" : "cylinder has empty interior";
    rep.verdict = rep.estimate.hits == 0 ? Verdict::pass : Verdict::fail;
    return rep;
  }
  const Interval area = region_area(r);
  const ConvergentSeq cs = prefix_convergents(digits);
  const double q = abs_d(cs.q(static_cast<long>(n)));
  rep.area = area.mid();
  rep.q_abs = q;
  const double q4 = std::pow(q, 4);
  rep.band_lo = k.jac_lo.value.lo * area.lo / q4;
  rep.band_hi = k.jac_hi.value.hi * area.hi / q4;
  if (rep.estimate.hits < kMinHits) {
    rep.note = "insufficient hits";
    rep.verdict = Verdict::inconclusive;
  } else {
    rep.verdict = overlaps(rep.estimate.lo, rep.estimate.hi, rep.band_lo, rep.band_hi) ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

// ---------------------------------------------------------------------------

RatioReport ratio_band_check(const std::vector<GaussInt>& prefix, const std::vector<GaussInt>& next,
                             const SampleSpec& spec, const std::vector<long>& lowbow_M, const ExecPolicy& exec) {
  check_depths(spec, prefix.size() + 1);
  for (const GaussInt& b : next)
    if (abs_sq(b) < 2) throw InvalidDigit("next digit " + b.to_string() + " has |b|^2 < 2");
  if (!is_regular(prefix)) throw InvalidArgument("prefix is not regular");
  const DerivedConstants& k = DerivedConstants::get();
  const std::size_t n = prefix.size();

  RatioReport rep;
  rep.prefix = prefix;
  rep.spec = spec;
  rep.draws = spec.count;

  // Every z in C_n(a) is (p_n + p_{n-1} w) / (q_n + q_{n-1} w) with w in F, so
  // |z - p_n/q_n| <= (sqrt 2 / 2) / (|q_n|^2 (1 - |q_{n-1}/q_n| sqrt 2 / 2)).
  DyadicBox box;
  if (n == 0) {
    mpz_setbit(box.x0.get_mpz_t(), spec.bits - 1);
    box.x0 = -box.x0;
    box.y0 = box.x0;
    box.side_bits = spec.bits;
  } else {
    const ConvergentSeq cs = prefix_convergents(prefix);
    const GaussInt& p = cs.pairs.back().p;
    const GaussInt& q = cs.pairs.back().q;
    const double qq = abs_sq(q).get_d();
    const double cx = (p.re.get_d() * q.re.get_d() + p.im.get_d() * q.im.get_d()) / qq;
    const double cy = (p.im.get_d() * q.re.get_d() - p.re.get_d() * q.im.get_d()) / qq;
    const double ratio = abs_d(cs.q(static_cast<long>(n) - 1)) / std::sqrt(qq);
    const double h = std::sqrt(0.5);
    box = box_around(cx, cy, h / (qq * (1 - ratio * h)), spec.bits);
  }
  mpz_class half;
  mpz_setbit(half.get_mpz_t(), spec.bits - 1);

  const std::size_t nb = next.size(), nm = lowbow_M.size();
  const Counts c = tally(spec.count, 2 + nb + nm, exec, [&](std::uint64_t i, Walker& w, Counts& t) {
    mpz_class j, kk;
    sample_box(spec, box, i, j, kk);
    if (j < -half || j >= half || kk < -half || kk >= half) return;
    w.reset(j, kk, spec.bits, n + 1);
    SmallDigit d;
    for (std::size_t s = 0; s < n; ++s) {
      if (!w.next(d)) return;  // a rational ending inside the prefix is not in C_n(a)
      if (!same(d, prefix[s])) return;
    }
    if (!w.next(d)) {
      ++t.v[1];
      return;
    }
    ++t.v[0];
    for (std::size_t b = 0; b < nb; ++b)
      if (same(d, next[b])) ++t.v[2 + b];
    const std::int64_t sup = std::max(d.re < 0 ? -d.re : d.re, d.im < 0 ? -d.im : d.im);
    for (std::size_t m = 0; m < nm; ++m)
      if (sup <= lowbow_M[m]) ++t.v[2 + nb + m];
  });
  rep.in_prefix = c.v[0] + c.v[1];
  rep.exhausted = c.v[1];
  const std::uint64_t trials = c.v[0];

  const Interval area_n = region_area(cylinder_region(prefix));
  rep.area_prefix = area_n.mid();
  std::vector<Verdict> verdicts;
  for (std::size_t b = 0; b < nb; ++b) {
    RatioRow row;
    row.b = next[b];
    row.ratio = wilson(c.v[2 + b], trials);
    std::vector<GaussInt> ext = prefix;
    ext.push_back(next[b]);
    const Interval area_next = region_area(cylinder_region(ext));
    row.area_next = area_next.mid();
    const double m = abs_d(next[b]);
    row.band_lo = k.jac_lo.value.lo / k.jac_hi.value.hi * (area_next.lo / area_n.hi) / std::pow(m + 1, 4);
    row.band_hi = k.jac_hi.value.hi / k.jac_lo.value.lo * (area_next.hi / area_n.lo) / std::pow(m - 1, 4);
    row.simple_lo = 1.0 / (16 * std::pow(m, 4));
    row.simple_hi = k.kappa3.value.hi / std::pow(m, 4);
    if (row.ratio.hits < kMinHits) {
      row.verdict = Verdict::inconclusive;
    } else {
      row.verdict = overlaps(row.ratio.lo, row.ratio.hi, row.band_lo, row.band_hi) ? Verdict::pass : Verdict::fail;
    }
    verdicts.push_back(row.verdict);
    rep.rows.push_back(row);
  }
  for (std::size_t b = 1; b < nb; ++b) {
    ScalingRow s;
    s.b = next[b];
    s.base = next[0];
    const std::uint64_t h0 = c.v[2], h1 = c.v[2 + b];
    const double ab = abs_sq(s.base).get_d() / abs_sq(s.b).get_d();
    s.predicted = ab * ab;
    if (h0 < kMinHits || h1 < kMinHits) {
      s.verdict = Verdict::inconclusive;
    } else {
      // Log-ratio interval for two cells of one multinomial sample.
      const double N = static_cast<double>(trials);
      const double p0 = h0 / N, p1 = h1 / N;
      const double se = std::sqrt((1 - p0) / (N * p0) + (1 - p1) / (N * p1) + 2 / N);
      s.ratio = p1 / p0;
      s.lo = s.ratio * std::exp(-kZ99 * se);
      s.hi = s.ratio * std::exp(kZ99 * se);
      s.verdict = (s.lo <= s.predicted && s.predicted <= s.hi) ? Verdict::pass : Verdict::fail;
    }
    verdicts.push_back(s.verdict);
    rep.scaling.push_back(s);
  }
  for (std::size_t m = 0; m < nm; ++m) {
    LowBowRow l;
    l.M = lowbow_M[m];
    l.p_le = wilson(c.v[2 + nb + m], trials);
    const double M1 = static_cast<double>(l.M + 1);
    l.bound = 1 - k.c_bb.value.hi / (M1 * M1);
    l.verdict = trials == 0 ? Verdict::inconclusive : (l.p_le.lo <= l.bound ? Verdict::pass : Verdict::fail);
    verdicts.push_back(l.verdict);
    rep.lowbow.push_back(l);
  }
  rep.verdict = combine(verdicts);
  return rep;
}

// ---------------------------------------------------------------------------

USequence USequence::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("u-sequence must look like power:A, const:C or list:...");
  const std::string kind(text.substr(0, colon));
  const std::string rest(text.substr(colon + 1));
  USequence u;
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw InvalidArgument("bad number '" + s + "' in u-sequence");
    return v;
  };
  if (kind == "power") {
    u.kind = Kind::power;
    u.param = number(rest);
  } else if (kind == "const") {
    u.kind = Kind::constant;
    u.param = number(rest);
    if (u.param <= 0) throw InvalidArgument("u-sequence values must be positive");
  } else if (kind == "list") {
    u.kind = Kind::list;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      u.values.push_back(number(item));
      if (u.values.back() <= 0) throw InvalidArgument("u-sequence values must be positive");
    }
    if (u.values.empty()) throw InvalidArgument("empty u-sequence list");
  } else {
    throw InvalidArgument("unknown u-sequence kind '" + kind + "'");
  }
  return u;
}

std::string USequence::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::power: os << "power:" << param; break;
    case Kind::constant: os << "const:" << param; break;
    case Kind::list:
      os << "list:";
      for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
      break;
  }
  return os.str();
}

double USequence::value(std::size_t n) const {
  switch (kind) {
    case Kind::power: return std::pow(static_cast<double>(n), param);
    case Kind::constant: return param;
    case Kind::list: return values[std::min(n, values.size()) - 1];
  }
  return 0;
}

long double USequence::squared(std::size_t n) const {
  if (kind == Kind::power) {
    const long double x = static_cast<long double>(n);
    if (param == 1.0) return x * x;
    if (param == 0.5) return x;
    return std::pow(x, 2.0L * param);
  }
  const long double v = value(n);
  return v * v;
}

bool USequence::series_converges() const {
  switch (kind) {
    case Kind::power: return param > 0.5;
    case Kind::constant: return false;
    case Kind::list: return false;  // the last value repeats
  }
  return false;
}

std::vector<Window> dyadic_windows(int k_lo, int k_hi) {
  std::vector<Window> out;
  for (int k = k_lo; k <= k_hi; ++k) out.push_back({std::size_t{1} << k, std::size_t{1} << (k + 1)});
  return out;
}

BBReport bb_experiment(const USequence& u, const SampleSpec& spec, const std::vector<Window>& windows,
                       const std::vector<std::size_t>& cumulative_depths, std::size_t cumulative_from,
                       const ExecPolicy& exec) {
  std::size_t need = 0;
  for (const Window& w : windows) {
    if (w.lo >= w.hi) throw InvalidArgument("empty window");
    need = std::max(need, w.hi);
  }
  for (std::size_t d : cumulative_depths) need = std::max(need, d);
  if (need == 0) throw InvalidArgument("no windows or depths requested");
  check_depths(spec, need);
  const DerivedConstants& k = DerivedConstants::get();

  BBReport rep;
  rep.u = u;
  rep.spec = spec;
  rep.cumulative_from = cumulative_from;
  const std::size_t nw = windows.size(), nc = cumulative_depths.size();
  std::vector<long double> u2(need + 1);
  for (std::size_t n = 1; n <= need; ++n) u2[n] = u.squared(n);

  // Slots: [0] trials, [1] exhausted, then 3 per window, then 2 per depth.
  const Counts c = tally(spec.count, 2 + 3 * nw + 2 * nc, exec, [&](std::uint64_t i, Walker& w, Counts& t) {
    mpz_class j, kk;
    sample_dyadic(spec, i, j, kk);
    w.reset(j, kk, spec.bits, need);
    std::vector<unsigned char> ev(need + 1, 0);
    SmallDigit d;
    for (std::size_t n = 1; n <= need; ++n) {
      if (!w.next(d)) {
        ++t.v[1];
        return;
      }
      const long double a = static_cast<long double>(d.abs_sq());
      const long double s = static_cast<long double>(d.sup_sq());
      ev[n] = static_cast<unsigned char>((a >= u2[n] ? 1 : 0) | (s >= u2[n] ? 2 : 0) | (2 * s >= u2[n] ? 4 : 0));
    }
    ++t.v[0];
    for (std::size_t wi = 0; wi < nw; ++wi) {
      unsigned char any = 0;
      for (std::size_t n = windows[wi].lo + 1; n <= windows[wi].hi; ++n) any |= ev[n];
      for (int b = 0; b < 3; ++b)
        if (any & (1 << b)) ++t.v[2 + 3 * wi + b];
    }
    std::size_t first_mod = need + 1, first_sup = need + 1;
    for (std::size_t n = std::max<std::size_t>(cumulative_from, 1); n <= need; ++n) {
      if ((ev[n] & 1) && first_mod > need) first_mod = n;
      if ((ev[n] & 2) && first_sup > need) first_sup = n;
    }
    for (std::size_t ci = 0; ci < nc; ++ci) {
      if (first_mod <= cumulative_depths[ci]) ++t.v[2 + 3 * nw + 2 * ci];
      if (first_sup <= cumulative_depths[ci]) ++t.v[2 + 3 * nw + 2 * ci + 1];
    }
  });
  const std::uint64_t trials = c.v[0];
  rep.exhausted = c.v[1];

  std::vector<Verdict> verdicts;
  bool sandwich = true;
  for (std::size_t wi = 0; wi < nw; ++wi) {
    BBWindowRow row;
    row.w = windows[wi];
    row.modulus = wilson(c.v[2 + 3 * wi], trials);
    row.sup = wilson(c.v[2 + 3 * wi + 1], trials);
    row.sup_relaxed = wilson(c.v[2 + 3 * wi + 2], trials);
    row.sandwich = row.sup.hits <= row.modulus.hits && row.modulus.hits <= row.sup_relaxed.hits;
    sandwich = sandwich && row.sandwich;
    double bound = 0;
    for (std::size_t n = row.w.lo + 1; n <= row.w.hi; ++n) {
      const double un = u.value(n);
      bound = un > 1 ? bound + k.c_tail.value.hi / ((un - 1) * (un - 1)) : std::numeric_limits<double>::infinity();
    }
    row.tail_bound = bound;
    rep.windows.push_back(row);
  }
  for (std::size_t ci = 0; ci < nc; ++ci) {
    BBCumulativeRow row;
    row.depth = cumulative_depths[ci];
    row.modulus = wilson(c.v[2 + 3 * nw + 2 * ci], trials);
    row.sup = wilson(c.v[2 + 3 * nw + 2 * ci + 1], trials);
    rep.cumulative.push_back(row);
  }

  rep.checks.push_back(std::string("sandwich sup <= modulus <= relaxed in every window: ") + (sandwich ? "yes" : "no"));
  verdicts.push_back(sandwich ? Verdict::pass : Verdict::fail);
  bool forced = true;  // u_n^2 < 2 everywhere: |a_n| >= sqrt 2 always exceeds u_n
  for (std::size_t n = 1; n <= need; ++n) forced = forced && u2[n] < 2;
  if (trials == 0) {
    verdicts.push_back(Verdict::inconclusive);
  } else if (forced) {
    bool all = true;
    for (const auto& r : rep.windows) all = all && r.modulus.hits == trials;
    for (const auto& r : rep.cumulative) all = all && r.modulus.hits == trials;
    rep.checks.push_back(std::string("u_n below sqrt 2, every fraction equals 1: ") + (all ? "yes" : "no"));
    verdicts.push_back(all ? Verdict::pass : Verdict::fail);
  } else if (u.series_converges()) {
    bool under = true, decreasing = true;
    for (std::size_t wi = 0; wi < rep.windows.size(); ++wi) {
      const auto& r = rep.windows[wi];
      under = under && r.sup.lo <= r.tail_bound;
      if (wi > 0) decreasing = decreasing && r.modulus.estimate <= rep.windows[wi - 1].modulus.estimate;
    }
    rep.checks.push_back(std::string("each window within its tail bound: ") + (under ? "yes" : "no"));
    rep.checks.push_back(std::string("window fractions non-increasing: ") + (decreasing ? "yes" : "no"));
    verdicts.push_back(under ? Verdict::pass : Verdict::fail);
    verdicts.push_back(decreasing ? Verdict::pass : Verdict::fail);
  } else {
    bool monotone = true;
    for (std::size_t ci = 1; ci < rep.cumulative.size(); ++ci) {
      const auto& a = rep.cumulative[ci - 1].modulus;
      const auto& b = rep.cumulative[ci].modulus;
      monotone = monotone && (b.hits > a.hits || a.hits == trials);
    }
    rep.checks.push_back(std::string("cumulative fraction increasing: ") + (monotone ? "yes" : "no"));
    verdicts.push_back(monotone ? Verdict::pass : Verdict::fail);
    if (!rep.cumulative.empty()) {
      const Proportion& last = rep.cumulative.back().modulus;
      Verdict v = last.estimate >= 0.9 ? Verdict::pass : (last.hi < 0.9 ? Verdict::fail : Verdict::inconclusive);
      rep.checks.push_back("cumulative fraction at depth " + std::to_string(rep.cumulative.back().depth) +
                           " >= 0.9: " + fmt(last.estimate));
      verdicts.push_back(v);
    }
  }
  rep.verdict = combine(verdicts);
  return rep;
}

// ---------------------------------------------------------------------------

LevyReport levy_estimate(const SampleSpec& spec, const std::vector<std::size_t>& checkpoints, const ExecPolicy& exec) {
  if (checkpoints.empty()) throw InvalidArgument("no checkpoints");
  std::vector<std::size_t> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (cps.front() == 0) throw InvalidArgument("checkpoint 0 is not allowed");
  check_depths(spec, cps.back());
  const std::size_t need = cps.back();

  // values[c][i]: (1/n) log|q_n| of sample i at checkpoint c; NaN if exhausted.
  std::vector<std::vector<double>> values(cps.size(), std::vector<double>(spec.count));
  for_samples(spec.count, exec, [&](std::uint64_t i, Walker& w) {
    mpz_class j, kk;
    sample_dyadic(spec, i, j, kk);
    w.reset(j, kk, spec.bits, need);
    SmallDigit d;
    std::size_t c = 0;
    for (std::size_t n = 1; n <= need; ++n) {
      if (!w.next(d)) break;
      w.push(d);
      if (n == cps[c]) values[c++][i] = w.log_abs_q() / static_cast<double>(n);
    }
    for (; c < cps.size(); ++c) values[c][i] = std::numeric_limits<double>::quiet_NaN();
  });

  LevyReport rep;
  rep.spec = spec;
  for (std::size_t c = 0; c < cps.size(); ++c) {
    LevyRow row;
    row.n = cps[c];
    std::vector<double> kept;
    kept.reserve(values[c].size());
    for (double v : values[c]) {
      if (std::isnan(v)) {
        ++row.exhausted;
      } else {
        kept.push_back(v);
      }
    }
    row.stats = summarize(kept);
    row.rel_sd = row.stats.mean != 0 ? row.stats.sd / row.stats.mean : 0.0;
    rep.rows.push_back(row);
  }
  const LevyRow& last = rep.rows.back();
  rep.B = last.stats.mean;
  rep.B_lo = last.stats.ci_lo;
  rep.B_hi = last.stats.ci_hi;

  std::vector<Verdict> verdicts;
  if (last.stats.n < 2) {
    verdicts.push_back(Verdict::inconclusive);
  } else {
    rep.checks.push_back("B > 0: " + fmt(rep.B_lo));
    verdicts.push_back(rep.B_lo > 0 ? Verdict::pass : Verdict::fail);
    rep.checks.push_back("relative sd at n = " + std::to_string(last.n) + " <= 0.05: " + fmt(last.rel_sd));
    verdicts.push_back(last.rel_sd <= 0.05 ? Verdict::pass : Verdict::fail);
    bool shrinking = true;
    for (std::size_t a = 0; a < rep.rows.size(); ++a)
      for (std::size_t b = a + 1; b < rep.rows.size(); ++b)
        if (rep.rows[b].n >= 2 * rep.rows[a].n) shrinking = shrinking && rep.rows[b].stats.sd < rep.rows[a].stats.sd;
    rep.checks.push_back(std::string("sd shrinks when n doubles: ") + (shrinking ? "yes" : "no"));
    verdicts.push_back(shrinking ? Verdict::pass : Verdict::fail);
  }
  rep.verdict = combine(verdicts);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// kappa^4 = (4 + 2 sqrt 2)^4 = 1088 + 768 sqrt 2.
const double kLogKappa4 = 4 * std::log(4 + 2 * std::sqrt(2.0));

mpz_class pow_z(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// kappa / |a| <= |q|^(2 - beta), i.e. kappa^4 <= A^2 Q^(4 - 2 beta) with
// A = |a|^2, Q = |q|^2.
bool certificate_fires(const SmallDigit& a, const mpz_class& qr, const mpz_class& qi, double log_q, long two_beta) {
  const long e = 4 - two_beta;
  const double lhs = 2 * std::log(static_cast<double>(a.abs_sq())) + static_cast<double>(e) * 2 * log_q;
  if (std::fabs(lhs - kLogKappa4) > 1e-9 * (std::fabs(lhs) + kLogKappa4 + 1)) return lhs > kLogKappa4;
  const mpz_class A = mpz_class(static_cast<long>(a.re)) * a.re + mpz_class(static_cast<long>(a.im)) * a.im;
  const mpz_class A2 = A * A;
  const mpz_class Q = qr * qr + qi * qi;
  if (e >= 0) {
    const mpz_class X = A2 * pow_z(Q, static_cast<unsigned long>(e));
    return sign_plus_sqrt2(BigRational(X - 1088), BigRational(-768)) >= 0;
  }
  const mpz_class Y = pow_z(Q, static_cast<unsigned long>(-e));
  return sign_plus_sqrt2(BigRational(A2 - 1088 * Y), BigRational(-768 * Y)) >= 0;
}

// |z - p/q| <= |q|^-beta for z = (j + k i) / 2^bits, decided on integers:
// with E = |(j + k i) q - 2^bits p|^2, the claim is E^2 Q^(2 beta - 2) <= 2^(4 bits).
bool approximation_holds(const mpz_class& j, const mpz_class& k, unsigned bits, const Walker& w, long two_beta) {
  const mpz_class& qr = w.q_re();
  const mpz_class& qi = w.q_im();
  mpz_class er = j * qr - k * qi, ei = j * qi + k * qr;
  er -= mpz_class(w.p_re()) << bits;
  ei -= mpz_class(w.p_im()) << bits;
  const mpz_class E = er * er + ei * ei;
  const mpz_class Q = qr * qr + qi * qi;
  mpz_class lim;
  mpz_setbit(lim.get_mpz_t(), 4 * static_cast<unsigned long>(bits));
  const long f = two_beta - 2;
  if (f >= 0) return E * E * pow_z(Q, static_cast<unsigned long>(f)) <= lim;
  return E * E <= lim * pow_z(Q, static_cast<unsigned long>(-f));
}

}  // namespace

KhinchinReport khinchin_experiment(double beta, const SampleSpec& spec, double big_D,
                                   const std::vector<std::size_t>& checkpoints, const ExecPolicy& exec) {
  const long two_beta = std::lround(2 * beta);
  if (std::fabs(2 * beta - static_cast<double>(two_beta)) > 1e-12 || beta <= 0)
    throw InvalidArgument("psi exponent beta must be a positive multiple of 1/2");
  if (!(big_D > 0)) throw InvalidArgument("big D must be positive");
  if (checkpoints.empty()) throw InvalidArgument("no checkpoints");
  std::vector<std::size_t> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (cps.front() < 2) throw InvalidArgument("checkpoints must be >= 2");
  check_depths(spec, cps.back());
  const std::size_t need = cps.back();
  const std::size_t nc = cps.size();

  KhinchinReport rep;
  rep.beta = beta;
  rep.spec = spec;
  rep.big_D = big_D;
  rep.divergent = 3 - 2 * beta >= -1;

  // Per-sample counts at each checkpoint; -1 marks an exhausted sample.
  std::vector<std::vector<double>> counts(nc, std::vector<double>(spec.count));
  std::vector<unsigned char> q_ok(spec.count, 0);
  // Slots: fired, verified, violations.
  const Counts c = tally(spec.count, 3, exec, [&](std::uint64_t i, Walker& w, Counts& t) {
    mpz_class j, kk;
    sample_dyadic(spec, i, j, kk);
    w.reset(j, kk, spec.bits, need);
    SmallDigit a;
    bool ok = w.next(a);
    if (ok) w.push(a);
    std::uint64_t fired = 0;
    std::size_t ci = 0;
    for (std::size_t n = 1; ok && n < need; ++n) {
      // State holds (p_n, q_n); look ahead to a_{n+1}.
      if (!w.next(a)) {
        ok = false;
        break;
      }
      if (certificate_fires(a, w.q_re(), w.q_im(), w.log_abs_q(), two_beta)) {
        ++fired;
        ++t.v[0];
        if (approximation_holds(j, kk, spec.bits, w, two_beta)) {
          ++t.v[1];
        } else {
          ++t.v[2];
        }
      }
      w.push(a);
      while (ci < nc && cps[ci] == n + 1) counts[ci++][i] = static_cast<double>(fired);
    }
    if (!ok) {
      for (std::size_t c2 = 0; c2 < nc; ++c2) counts[c2][i] = -1;
      return;
    }
    q_ok[i] = w.log_abs_q() < big_D * static_cast<double>(need) ? 1 : 0;
  });
  rep.fired = c.v[0];
  rep.verified = c.v[1];
  rep.violations = c.v[2];

  std::uint64_t trials = 0, grow = 0, qgood = 0;
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    if (counts[0][i] < 0) {
      ++rep.exhausted;
      continue;
    }
    ++trials;
    if (nc >= 2 && counts[nc - 1][i] > counts[nc - 2][i]) ++grow;
    qgood += q_ok[i];
  }
  for (std::size_t ci = 0; ci < nc; ++ci) {
    std::vector<double> kept;
    for (double v : counts[ci])
      if (v >= 0) kept.push_back(v);
    rep.rows.push_back({cps[ci], summarize(kept)});
  }
  rep.growing = wilson(grow, trials);
  rep.q_bound = wilson(qgood, trials);
  for (std::size_t N : {10, 100, 1000, 10000, 100000}) {
    double s = 0;
    for (std::size_t n = 1; n <= N; ++n) s += std::pow(static_cast<double>(n), 3 - 2 * beta);
    rep.series.emplace_back(N, s);
  }

  std::vector<Verdict> verdicts;
  rep.checks.push_back("re-verified certificates: " + std::to_string(rep.verified) + " of " + std::to_string(rep.fired));
  verdicts.push_back(rep.violations == 0 ? Verdict::pass : Verdict::fail);
  if (nc < 2 || trials == 0) {
    verdicts.push_back(Verdict::inconclusive);
  } else if (rep.divergent) {
    rep.checks.push_back("fraction with growing counts >= 0.9: " + fmt(rep.growing.estimate));
    verdicts.push_back(rep.growing.estimate >= 0.9 ? Verdict::pass
                                                   : (rep.growing.hi < 0.9 ? Verdict::fail : Verdict::inconclusive));
  } else {
    const double still = 1 - rep.growing.estimate;
    rep.checks.push_back("fraction with no growth >= 0.9: " + fmt(still));
    verdicts.push_back(still >= 0.9 ? Verdict::pass
                                    : (1 - rep.growing.lo < 0.9 ? Verdict::fail : Verdict::inconclusive));
  }
  rep.verdict = combine(verdicts);
  return rep;
}

}  // namespace hurwitz
