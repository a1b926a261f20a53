#include "hurwitz/hcf.hpp"

#include <string>

namespace hurwitz {

GaussInt ConvergentSeq::p(long n) const {
  if (n == -2) return 0;
  if (n == -1) return 1;
  return pairs.at(static_cast<std::size_t>(n)).p;
}

GaussInt ConvergentSeq::q(long n) const {
  if (n == -2) return 1;
  if (n == -1) return 0;
  return pairs.at(static_cast<std::size_t>(n)).q;
}

std::optional<MapStep> gauss_map_step(const GaussRational& z) {
  if (!in_fundamental_domain(z)) throw NotInFundamentalDomain();
  if (z.is_zero()) return std::nullopt;
  GaussRational w = z.inverse();
  GaussInt digit = round_nearest(w);
  GaussRational next = w - GaussRational(digit);
  return MapStep{std::move(digit), std::move(next)};
}

Trajectory hcf_expand_exact(const GaussRational& z, std::size_t max_depth) {
  if (max_depth == 0) throw InvalidArgument("max_depth must be >= 1");
  Trajectory t;
  t.start = z;
  t.digit_string.a0 = round_nearest(z);
  t.tails.push_back(z - GaussRational(t.digit_string.a0));
  while (t.digit_string.digits.size() < max_depth) {
    auto step = gauss_map_step(t.tails.back());
    if (!step) {
      t.digit_string.terminated = true;
      break;
    }
    t.digit_string.digits.push_back(std::move(step->digit));
    t.tails.push_back(std::move(step->next));
  }
  if (!t.digit_string.terminated && t.tails.back().is_zero()) t.digit_string.terminated = true;
  return t;
}

namespace {

// Rounds a ball coordinate to its Hurwitz cell if the whole range
// [c - r, c + r] lies in [k - 1/2, k + 1/2).
std::optional<BigInt> certified_round(const Dyadic& center, const Dyadic& rad) {
  const BigRational c = center.to_rational();
  const BigRational r = rad.to_rational();
  BigInt k = round_half_up(c);
  const BigRational half(1, 2);
  if (c - r >= BigRational(k) - half && c + r < BigRational(k) + half) return k;
  return std::nullopt;
}

std::optional<GaussInt> certified_digit(const ComplexBall& b) {
  auto re = certified_round(b.re, b.rad);
  if (!re) return std::nullopt;
  auto im = certified_round(b.im, b.rad);
  if (!im) return std::nullopt;
  return GaussInt(*re, *im);
}

}  // namespace

BallExpansion hcf_expand_ball(const ComplexBall& z, std::size_t n_digits) {
  BallExpansion out;
  if (cmp(z.rad, Dyadic(BigInt(1), -2)) >= 0) {
    out.status = BallExpansion::Status::digit_uncertain;
    return out;
  }
  auto a0 = certified_digit(z);
  if (!a0) {
    out.status = BallExpansion::Status::digit_uncertain;
    return out;
  }
  out.digits.a0 = *a0;
  ComplexBall cur = z.minus(*a0);
  for (std::size_t step = 1; step <= n_digits; ++step) {
    if (cur.rad.sign() == 0 && cur.re.sign() == 0 && cur.im.sign() == 0) {
      out.digits.terminated = true;
      return out;
    }
    if (cur.contains_zero()) {
      out.status = BallExpansion::Status::zero_straddle;
      out.step = step;
      return out;
    }
    auto inv = cur.inverse();
    if (!inv) {
      out.status = BallExpansion::Status::digit_uncertain;
      out.step = step;
      return out;
    }
    auto digit = certified_digit(*inv);
    if (!digit) {
      out.status = BallExpansion::Status::digit_uncertain;
      out.step = step;
      return out;
    }
    cur = inv->minus(*digit);
    out.digits.digits.push_back(std::move(*digit));
  }
  if (cur.rad.sign() == 0 && cur.re.sign() == 0 && cur.im.sign() == 0) out.digits.terminated = true;
  return out;
}

ConvergentSeq convergents(const DigitString& d) {
  ConvergentSeq c;
  c.pairs.reserve(d.digits.size() + 1);
  GaussInt p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (std::size_t n = 0; n <= d.digits.size(); ++n) {
    const GaussInt& a = n == 0 ? d.a0 : d.digits[n - 1];
    if (n > 0 && abs_sq(a) < 2) throw InadmissibleDigit(n);
    GaussInt p = a * p1 + p2;
    GaussInt q = a * q1 + q2;
    c.pairs.push_back({p, q});
    p2 = std::move(p1);
    p1 = std::move(p);
    q2 = std::move(q1);
    q1 = std::move(q);
  }
  return c;
}

GaussRational eval_finite(const DigitString& d) {
  GaussRational tail = 0;
  bool have_tail = false;
  for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
    GaussRational v = GaussRational(*it);
    if (have_tail) {
      if (tail.is_zero()) throw EvaluationSingularity();
      v = v + tail.inverse();
    }
    tail = v;
    have_tail = true;
  }
  if (!have_tail) return GaussRational(d.a0);
  if (tail.is_zero()) throw EvaluationSingularity();
  return GaussRational(d.a0) + tail.inverse();
}

ApproxQuality approx_quality(const Trajectory& t, std::size_t n) {
  return approx_quality(t, convergents(t.digit_string), n);
}

ApproxQuality approx_quality(const Trajectory& t, const ConvergentSeq& c, std::size_t n) {
  const auto& digits = t.digit_string.digits;
  if (n >= digits.size() || n >= c.pairs.size()) {
    throw IndexOutOfRange("approx_quality: digit a_" + std::to_string(n + 1) + " is not available");
  }
  const GaussInt& p = c.pairs[n].p;
  const GaussInt& q = c.pairs[n].q;
  // e_n^2 = |z q - p|^2 |a_{n+1}|^2 |q|^2
  const GaussRational diff = t.start * GaussRational(q) - GaussRational(p);
  ApproxQuality out;
  out.squared = diff.abs_sq() * BigRational(abs_sq(digits[n]) * abs_sq(q));
  out.value = sqrt(Interval::exact(out.squared));
  // (4 + 2 sqrt 2)^2 = 24 + 16 sqrt 2
  out.within_bound = sign_plus_sqrt2(BigRational(24) - out.squared, BigRational(16)) >= 0;
  return out;
}

bool kappa1_lower_bound_holds(const Trajectory& t, const ConvergentSeq& c, std::size_t n) {
  const auto& digits = t.digit_string.digits;
  if (n >= digits.size()) throw IndexOutOfRange("kappa1 check needs a_{n+1}");
  const GaussRational& tail = t.tails.at(n);
  const GaussRational v = tail.inverse() + GaussRational::from_fraction(c.q(static_cast<long>(n) - 1), c.q(static_cast<long>(n)));
  const BigRational lhs = v.abs_sq();
  const BigRational a2(abs_sq(digits[n]));
  // kappa1^2 = (3 - 2 sqrt 2) / 8
  return sign_plus_sqrt2(lhs - a2 * BigRational(3, 8), a2 * BigRational(1, 4)) >= 0;
}

}  // namespace hurwitz
