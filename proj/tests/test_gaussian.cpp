#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hurwitz/exact.hpp"
#include "hurwitz/gaussian.hpp"

using namespace hurwitz;

namespace {

GaussRational q(long re, long im, long den) { return GaussRational::from_parts(BigInt(re), BigInt(im), BigInt(den)); }

// Largest-norm common divisor by exhaustive search over |d|^2 <= bound.
std::int64_t brute_gcd_norm(std::int64_t ar, std::int64_t ai, std::int64_t br, std::int64_t bi) {
  auto divides = [](std::int64_t dr, std::int64_t di, std::int64_t xr, std::int64_t xi) {
    // x / d = x conj(d) / |d|^2
    const std::int64_t n = dr * dr + di * di;
    const std::int64_t re = xr * dr + xi * di;
    const std::int64_t im = xi * dr - xr * di;
    return re % n == 0 && im % n == 0;
  };
  const std::int64_t na = ar * ar + ai * ai;
  const std::int64_t nb = br * br + bi * bi;
  std::int64_t bound = na == 0 ? nb : (nb == 0 ? na : std::min(na, nb));
  std::int64_t best = 0;
  const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(bound))) + 1;
  for (std::int64_t dr = 0; dr <= r; ++dr) {
    for (std::int64_t di = 0; di <= r; ++di) {
      const std::int64_t n = dr * dr + di * di;
      if (n == 0 || n > bound || n <= best) continue;
      if (divides(dr, di, ar, ai) && divides(dr, di, br, bi)) best = n;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("round_nearest follows floor(x + 1/2)") {
  CHECK(round_nearest(q(1, 1, 2)) == GaussInt(1, 1));
  CHECK(round_nearest(GaussRational(0)) == GaussInt(0));
  CHECK(round_nearest(q(12, -7, 10)) == GaussInt(1, -1));
  CHECK(round_nearest(q(-1, 0, 2)) == GaussInt(0));
  CHECK(round_nearest(q(-3, 0, 2)) == GaussInt(-1));
}

TEST_CASE("round_nearest vanishes exactly on the half-open square") {
  const BigInt den = 1000;
  for (long x = -600; x <= 600; x += 7) {
    for (long y : {-600L, -501L, -500L, -499L, 0L, 499L, 500L, 501L}) {
      const bool inside = -500 <= x && x < 500 && -500 <= y && y < 500;
      const auto z = GaussRational::from_parts(BigInt(x), BigInt(y), den);
      CHECK(round_nearest(z).is_zero() == inside);
      CHECK(in_fundamental_domain(z) == inside);
    }
  }
}

TEST_CASE("norms") {
  CHECK(sup_norm(GaussInt(3, -4)) == 4);
  CHECK(abs_sq(GaussInt(3, -4)) == 25);
  CHECK(sup_norm(GaussInt(0)) == 0);
  CHECK(abs_sq(GaussInt(0)) == 0);
  int shell = 0;
  for (long x = -3; x <= 3; ++x)
    for (long y = -3; y <= 3; ++y)
      if (sup_norm(GaussInt(x, y)) == 2) ++shell;
  CHECK(shell == 16);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-1000000, 1000000);
  for (int i = 0; i < 1000; ++i) {
    GaussInt g(d(rng), d(rng));
    const BigInt s = sup_norm(g);
    CHECK(s * s <= abs_sq(g));
    CHECK(abs_sq(g) <= 2 * s * s);
  }
}

TEST_CASE("gauss_gcd examples") {
  CHECK(gauss_gcd(GaussInt(2), GaussInt(1, 1)) == GaussInt(1, 1));
  CHECK(gauss_gcd(GaussInt(-3, 5), GaussInt(0)) == unit_normalize(GaussInt(-3, 5)));
  CHECK(gauss_gcd(GaussInt(3), GaussInt(1)) == GaussInt(1));
  CHECK(gauss_gcd(GaussInt(0), GaussInt(0)) == GaussInt(0));
  CHECK(unit_normalize(GaussInt(-2, -1)) == GaussInt(2, 1));
  CHECK(unit_normalize(GaussInt(0, -3)) == GaussInt(3, 0));
}

TEST_CASE("gauss_gcd agrees with exhaustive divisor search") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-70, 70);
  for (int i = 0; i < 300; ++i) {
    const long ar = d(rng), ai = d(rng), br = d(rng), bi = d(rng);
    if (ar == 0 && ai == 0 && br == 0 && bi == 0) continue;
    const GaussInt g = gauss_gcd(GaussInt(ar, ai), GaussInt(br, bi));
    CHECK(abs_sq(g) == brute_gcd_norm(ar, ai, br, bi));
    CHECK(sgn(g.re) > 0);
    CHECK(sgn(g.im) >= 0);
  }
}

TEST_CASE("gauss_gcd divides both arguments on large inputs") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    GaussInt common(static_cast<long>(rng() % 2000) - 1000, static_cast<long>(rng() % 2000) - 1000);
    GaussInt a = common * GaussInt(static_cast<long>(rng() % 100000), static_cast<long>(rng() % 100000) - 50000);
    GaussInt b = common * GaussInt(static_cast<long>(rng() % 100000) - 50000, static_cast<long>(rng() % 100000));
    const GaussInt g = gauss_gcd(a, b);
    if (g.is_zero()) {
      CHECK(a.is_zero());
      CHECK(b.is_zero());
      continue;
    }
    CHECK(GaussRational::from_fraction(a, g).is_gaussian_integer());
    CHECK(GaussRational::from_fraction(b, g).is_gaussian_integer());
    if (!common.is_zero()) CHECK(GaussRational::from_fraction(g, common).is_gaussian_integer());
  }
}

TEST_CASE("canonical rationals") {
  // (1+i)/(1-i) = (1+i)^2 / 2 = i
  CHECK(rat_canonical(GaussInt(1, 1), GaussInt(1, -1)) == GaussRational(GaussInt(0, 1)));
  const auto inv = rat_inverse(GaussRational(GaussInt(1, 1)));
  CHECK(inv.num() == GaussInt(1, -1));
  CHECK(inv.den() == 2);
  CHECK(rat_sub_gauss(q(1, 0, 2), GaussInt(1)) == q(-1, 0, 2));
  CHECK_THROWS_AS(rat_canonical(GaussInt(1), GaussInt(0)), DivisionByZero);
  CHECK_THROWS_AS(rat_inverse(GaussRational(0)), DivisionByZero);

  // Equal values from different representations are identical.
  const auto a = rat_canonical(GaussInt(6, 4), GaussInt(2, -2));
  const auto b = rat_canonical(GaussInt(-3, -2), GaussInt(-1, 1));
  CHECK(a == b);
  CHECK(rat_canonical(a.num(), GaussInt(a.den(), BigInt(0))) == a);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    GaussInt n(static_cast<long>(rng() % 200) - 100, static_cast<long>(rng() % 200) - 100);
    GaussInt d(static_cast<long>(rng() % 200) - 100, static_cast<long>(rng() % 200) - 100);
    GaussInt k(static_cast<long>(rng() % 20) - 10, static_cast<long>(rng() % 20) - 10);
    if (d.is_zero() || k.is_zero()) continue;
    const auto x = rat_canonical(n, d);
    CHECK(rat_canonical(n * k, d * k) == x);
    CHECK(rat_canonical(x.num(), GaussInt(x.den(), BigInt(0))) == x);
    if (!x.is_zero()) CHECK(x * x.inverse() == GaussRational(1));
    const BigInt g = gcd(gcd(x.num().re, x.num().im), x.den());
    CHECK(g == 1);
  }
}

TEST_CASE("complex literal grammar") {
  CHECK(parse_complex("2/5") == q(2, 0, 5));
  CHECK(parse_complex("1/2-3/4i") == q(2, -3, 4));
  CHECK(parse_complex("i") == q(0, 1, 1));
  CHECK(parse_complex("-i") == q(0, -1, 1));
  CHECK(parse_complex("3+4i") == q(3, 4, 1));
  CHECK(parse_complex("-2i") == q(0, -2, 1));
  CHECK(parse_gauss_int("1-2i") == GaussInt(1, -2));
  CHECK_THROWS_AS(parse_complex("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_complex("1+"), InvalidArgument);
  CHECK_THROWS_AS(parse_complex("abc"), InvalidArgument);
  CHECK_THROWS_AS(parse_gauss_int("1/2"), InvalidArgument);
  try {
    parse_complex("12x");
    FAIL("expected a parse error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("position 2") != std::string::npos);
  }
}

TEST_CASE("exact sign of a + b sqrt k") {
  CHECK(sign_plus_sqrt2(BigRational(-1), BigRational(1)) == 1);
  CHECK(sign_plus_sqrt2(BigRational(-99), BigRational(70)) == -1);  // 70 sqrt2 = 98.9949..
  CHECK(sign_plus_sqrt2(BigRational(-98), BigRational(70)) == 1);
  CHECK(sign_plus_sqrt2(BigRational(99), BigRational(-70)) == 1);
  CHECK(sign_plus_sqrt2(BigRational(0), BigRational(0)) == 0);
  CHECK(sign_plus_sqrt3(BigRational(-2), BigRational(1)) == -1);
  CHECK(sign_plus_sqrt3(BigRational(-97), BigRational(56)) == -1);  // 56 sqrt3 = 96.9948..
  CHECK(sign_plus_sqrt3(BigRational(-96), BigRational(56)) == 1);
  const Interval r2 = Interval::sqrt2();
  CHECK(r2.lo <= 1.4142135623730951);
  CHECK(r2.hi >= 1.4142135623730950);
  CHECK(r2.width() < 1e-15);
}
