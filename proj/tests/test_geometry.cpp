#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "hurwitz/census.hpp"
#include "hurwitz/geometry.hpp"
#include "hurwitz/hcf.hpp"

using namespace hurwitz;

namespace {

using Op = Constraint::Op;
using Side = Constraint::Side;
using Kind = Classification::Kind;

GaussRational q(long re, long im, long den) { return GaussRational::from_parts(BigInt(re), BigInt(im), BigInt(den)); }

const CensusReport& census() {
  static const CensusReport rep = prototype_census(12);
  return rep;
}

// w in F_n(a) iff w in F and pulling w back along a stays in F at every step:
// z_{k-1} = 1 / (a_k + z_k), and then [1/z_{k-1}] = a_k automatically.
bool pullback_oracle(const std::vector<GaussInt>& a, const GaussRational& w) {
  if (!in_fundamental_domain(w)) return false;
  GaussRational z = w;
  for (std::size_t k = a.size(); k-- > 0;) {
    z = (GaussRational(a[k]) + z).inverse();
    if (!in_fundamental_domain(z)) return false;
  }
  return true;
}

// Lebesgue length of {y in [-1/2, 1/2] : (x, y) in r}, by breakpoints and
// midpoint tests in double precision.
double slice_length(const Region& r, double x) {
  std::vector<double> cuts = {-0.5, 0.5};
  for (const Constraint& c : r.constraints) {
    if (c.kind == Constraint::Kind::halfplane) {
      cuts.push_back(c.h2.get_d() / 2);
      cuts.push_back(-c.h2.get_d() / 2);
    } else {
      const double dx = x - c.center.re.get_d();
      const double d = 1 - dx * dx;
      if (d > 0) {
        cuts.push_back(c.center.im.get_d() - std::sqrt(d));
        cuts.push_back(c.center.im.get_d() + std::sqrt(d));
      }
    }
  }
  for (double& v : cuts) v = std::clamp(v, -0.5, 0.5);
  std::sort(cuts.begin(), cuts.end());
  auto inside = [&](double y) {
    for (const Constraint& c : r.constraints) {
      double v;
      if (c.kind == Constraint::Kind::halfplane) {
        const double re[4] = {x, -y, -x, y};
        v = re[((c.unit % 4) + 4) % 4] - c.h2.get_d() / 2;
        const bool ok = (c.op == Op::ge || c.op == Op::gt) ? v > 0 : v < 0;
        if (!ok) return false;
      } else {
        const double dx = x - c.center.re.get_d(), dy = y - c.center.im.get_d();
        v = dx * dx + dy * dy - 1;
        const bool in = c.side == Side::inside_closed || c.side == Side::inside_open;
        if (in ? v > 0 : v < 0) return false;
      }
    }
    return true;
  };
  double len = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i] && inside(0.5 * (cuts[i] + cuts[i + 1]))) len += cuts[i + 1] - cuts[i];
  return len;
}

double simpson_area(const Region& r) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = slice_length(r, lm), frm = slice_length(r, rm);
        const double left = (m - a) / 6 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (depth <= 0 || std::fabs(left + right - whole) < 1e-10) return left + right;
        return rec(a, m, fa, flm, fm, left, depth - 1) + rec(m, b, fm, frm, fb, right, depth - 1);
      };
  // Split at the arrangement's kink abscissae so each piece is smooth.
  const double s = 1 - std::sqrt(3.0) / 2;
  const double xs[] = {-0.5, -s, 0.0, s, 0.5};
  double total = 0;
  for (int i = 0; i < 4; ++i) {
    const double a = xs[i], b = xs[i + 1], m = 0.5 * (a + b);
    const double fa = slice_length(r, a), fm = slice_length(r, m), fb = slice_length(r, b);
    total += rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 40);
  }
  return total;
}

std::vector<GaussInt> digits_upto(long radius) {
  std::vector<GaussInt> out;
  for (long x = -radius; x <= radius; ++x)
    for (long y = -radius; y <= radius; ++y) out.emplace_back(x, y);
  return out;
}

}  // namespace

TEST_CASE("F membership and area") {
  const Region f = base_region_F();
  CHECK(contains(f, 0));
  CHECK_FALSE(contains(f, q(1, 0, 2)));
  CHECK(contains(f, q(-1, 0, 2)));
  CHECK(contains(f, q(-1, -1, 2)));
  CHECK_FALSE(contains(f, q(0, 1, 2)));
  CHECK(region_area(f).lo == 1.0);
  CHECK(region_area(f).hi == 1.0);
  CHECK(region_area(Region::make_empty()).hi == 0.0);
  CHECK(region_classify(f).kind == Kind::full_square);
  // Rounding to 0 is the same set.
  for (long u = -6; u <= 6; ++u)
    for (long v = -6; v <= 6; ++v) CHECK(contains(f, q(u, v, 10)) == in_fundamental_domain(q(u, v, 10)));
}

TEST_CASE("atlas of the closed square") {
  const Atlas& a = Atlas::instance();
  CHECK(a.cells().size() == 49);
  CHECK(a.faces().count() == 12);
  long double total = 0;
  for (long double v : a.face_area()) total += v;
  CHECK(std::fabs(static_cast<double>(total) - 1.0) < 1e-15);
}

TEST_CASE("inverse of F is the four-disk region") {
  const Region inv = inv_region(base_region_F());
  const std::vector<Constraint> want = {
      Constraint::disk(GaussInt(-1, 0), Side::outside_closed),
      Constraint::disk(GaussInt(0, 1), Side::outside_closed),
      Constraint::disk(GaussInt(1, 0), Side::outside_open),
      Constraint::disk(GaussInt(0, -1), Side::outside_open),
  };
  REQUIRE(inv.constraints.size() == want.size());
  for (const Constraint& c : want)
    CHECK(std::find(inv.constraints.begin(), inv.constraints.end(), c) != inv.constraints.end());

  const Region f = canonicalize(base_region_F());
  const Region back = canonicalize(intersect(inv_region(inv), base_region_F()));
  CHECK(*back.canonical_id == *f.canonical_id);
}

TEST_CASE("inversion is an involution on census shapes") {
  for (const CensusShape& s : census().shapes) {
    const Region back = canonicalize(intersect(inv_region(inv_region(s.region)), base_region_F()));
    CHECK(*back.canonical_id == *s.region.canonical_id);
  }
}

TEST_CASE("F_1(1-i) agrees with the pullback oracle on a 1000 x 1000 grid") {
  const GaussInt a(1, -1);
  const Region r = cylinder_region({a});
  // Integer form of the oracle: w = (u + iv)/N, s = w + a = (X + iY)/N,
  // 1/s = N (X - iY) / D with D = X^2 + Y^2; in F iff -D <= 2NX < D and
  // -D <= -2NY < D.
  constexpr std::int64_t N = 1000;
  std::size_t inside = 0, mismatches = 0;
  for (std::int64_t u = -N / 2; u < N / 2; ++u) {
    for (std::int64_t v = -N / 2; v < N / 2; ++v) {
      const std::int64_t X = u + N, Y = v - N, D = X * X + Y * Y;
      const bool oracle = -D <= 2 * N * X && 2 * N * X < D && -D <= -2 * N * Y && -2 * N * Y < D;
      const bool got = contains(r, q(u, v, N));
      inside += got;
      mismatches += got != oracle;
    }
  }
  CHECK(mismatches == 0);
  // Grid fraction tracks the exact area.
  CHECK(std::fabs(static_cast<double>(inside) / (N * N) - region_area(r).mid()) < 5e-3);
}

TEST_CASE("inverted F_1(1-i) agrees with membership of 1/w") {
  const Region r = cylinder_region({GaussInt(1, -1)});
  const Region inv = inv_region(r);
  std::size_t mismatches = 0;
  for (long u = -300; u <= 300; ++u) {
    for (long v = -300; v <= 300; ++v) {
      if (u == 0 && v == 0) continue;
      const GaussRational w = q(u, v, 100);
      mismatches += contains(inv, w) != contains(r, w.inverse());
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("depth-one cylinders") {
  const std::set<std::string> empties = {"0", "1", "-1", "i", "-i"};
  for (const GaussInt& a : digits_upto(5)) {
    const Region r = cylinder_region({a});
    const Kind k = region_classify(r).kind;
    CAPTURE(a.to_string());
    CHECK((k == Kind::empty) == (empties.count(a.to_string()) == 1));
    CHECK((k == Kind::full_square) == (abs_sq(a) >= 8));
  }
  CHECK(region_classify(cylinder_region({3})).kind == Kind::full_square);
}

TEST_CASE("irregular strings (-1+i, 1-ni)") {
  for (long n = 2; n <= 10; ++n) {
    const std::vector<GaussInt> d = {GaussInt(-1, 1), GaussInt(1, -n)};
    CAPTURE(n);
    CHECK(region_classify(cylinder_region(d)).kind == Kind::degenerate);
    CHECK_FALSE(is_regular(d));
  }
  // The n = 2 shape is the part of Re z = -1/2 outside the circle at -1+i,
  // i.e. -1/2 <= y < 1 - sqrt(3)/2 ~ 0.1340.
  const std::vector<GaussInt> d = {GaussInt(-1, 1), GaussInt(1, -2)};
  const Region r = cylinder_region(d);
  for (long v = -500; v < 500; v += 7) {
    const GaussRational on = q(-500, v, 1000);
    CHECK(contains(r, on) == pullback_oracle(d, on));
    CHECK(contains(r, on) == (v < 134));
    CHECK_FALSE(contains(r, q(-499, v, 1000)));
  }
}

TEST_CASE("is_regular") {
  CHECK(is_regular({GaussInt(1, -1)}));
  CHECK_FALSE(is_regular({GaussInt(-1, 1), GaussInt(1, -3)}));
  CHECK(is_regular({3, 3}));
  CHECK_FALSE(is_regular({1}));
}

TEST_CASE("shell counts match lattice membership of 1/b") {
  auto brute = [](const Region& r, long m) {
    std::size_t n = 0;
    for (long x = -m; x <= m; ++x)
      for (long y = -m; y <= m; ++y)
        if (std::max(std::labs(x), std::labs(y)) == m && contains(r, GaussRational(GaussInt(x, y)).inverse())) ++n;
    return n;
  };
  const Region f = base_region_F();
  const Region g = interior(cylinder_region({GaussInt(1, -1)}));
  CHECK(shell_count(f, 2) == 14);
  CHECK(shell_count(g, 2) == 3);
  for (long m = 2; m <= 30; ++m) {
    CAPTURE(m);
    CHECK(shell_count(f, m) == brute(f, m));
    CHECK(shell_count(g, m) == brute(g, m));
    if (m >= 3) CHECK(shell_count(f, m) == static_cast<std::size_t>(8 * m));
  }
  for (const CensusShape& s : census().shapes) {
    for (long m = 2; m <= 8; ++m) CHECK(shell_count(s.region, m) == brute(s.region, m));
  }
}

TEST_CASE("shell envelope over census shapes") {
  for (const CensusShape& s : census().shapes) {
    if (s.kind == Kind::degenerate) continue;
    for (long m = 2; m <= 50; ++m) {
      const std::size_t c = shell_count(s.region, m);
      CAPTURE(*s.region.canonical_id);
      CAPTURE(m);
      CHECK(c >= static_cast<std::size_t>(2 * m - 1));
      CHECK(c <= static_cast<std::size_t>(8 * m));
    }
  }
}

TEST_CASE("areas agree with slice quadrature") {
  const Region r = cylinder_region({GaussInt(1, -1)});
  const Interval a = region_area(r);
  CHECK(a.width() < 1e-6);
  CHECK(std::fabs(a.mid() - simpson_area(r)) < 1e-8);
  CHECK(std::fabs(a.mid() - 0.293389) < 1e-6);
  for (const CensusShape& s : census().shapes) {
    CAPTURE(*s.region.canonical_id);
    CHECK(s.area.width() < 1e-6);
    CHECK(std::fabs(s.area.mid() - simpson_area(s.region)) < 1e-8);
  }
}

TEST_CASE("regions agree with the dynamics") {
  std::mt19937_64 rng(2024);
  const std::vector<GaussInt> pool = {GaussInt(1, -1), GaussInt(-1, 1), GaussInt(2, 0),  GaussInt(0, 2),
                                      GaussInt(2, 1),  GaussInt(-2, 1), GaussInt(1, 1),  GaussInt(-1, -1),
                                      GaussInt(1, -2), GaussInt(3, 0),  GaussInt(0, -2), GaussInt(-2, 0)};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(1, 3);
  std::uniform_int_distribution<long> coord(-64, 63);
  std::size_t agree_in = 0, agree_out = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<GaussInt> a(len(rng));
    for (GaussInt& d : a) d = pool[pick(rng)];
    const GaussRational w = q(coord(rng), coord(rng), 128);
    // Pull w back along a; z is the point that would map to w.
    GaussRational z = w;
    for (std::size_t k = a.size(); k-- > 0;) z = (GaussRational(a[k]) + z).inverse();
    const Trajectory t = hcf_expand_exact(z, a.size());
    const auto& ds = t.digit_string;
    const bool dyn = ds.a0.is_zero() && ds.digits.size() == a.size() && ds.digits == a && t.tails.back() == w;
    const bool geo = contains(cylinder_region(a), w);
    CHECK(dyn == geo);
    (geo ? agree_in : agree_out) += dyn == geo;
  }
  // Both outcomes must actually occur.
  CHECK(agree_in > 100);
  CHECK(agree_out > 100);
}

TEST_CASE("every regular census shape contains a rotated int F_1(1-i)") {
  const Region g = cylinder_region({GaussInt(1, -1)});
  for (const CensusShape& s : census().shapes) {
    CAPTURE(*s.region.canonical_id);
    CHECK(contains_rotated_interior(s.region, g) == (s.kind != Kind::degenerate));
  }
}

TEST_CASE("census goldens") {
  const CensusReport& c = census();
  CHECK(c.stabilized);
  CHECK(c.stabilization_depth == 6);
  CHECK(c.new_per_depth.back() == 0);
  CHECK(c.shapes.size() == 63);
  CHECK(c.new_per_depth == std::vector<std::size_t>{15, 21, 22, 4, 1, 0});
  CHECK(c.depth1_forms == 14);
  CHECK(c.depth1_classes == 3);
  CHECK(c.depth1_classes_with_full == 4);
  CHECK(c.interior_classes == 3);
  CHECK(std::fabs(c.min_regular_area - 0.293389) < 1e-6);
  // Depth-one areas take three values besides the full square.
  std::set<long> areas;
  for (const CensusShape& s : c.shapes)
    if (s.first_depth == 1 && s.kind == Kind::proper) areas.insert(std::lround(s.area.mid() * 1e6));
  CHECK(areas == std::set<long>{293389, 543389, 921213});
  CHECK_THROWS_AS(prototype_census(6, 10), BudgetExceeded);
}

TEST_CASE("census is independent of the digit radius beyond 4") {
  const CensusReport a = prototype_census(12, 4096, 4);
  const CensusReport b = prototype_census(12, 4096, 8);
  std::set<std::string> ia, ib;
  for (const auto& s : a.shapes) ia.insert(*s.region.canonical_id);
  for (const auto& s : b.shapes) ib.insert(*s.region.canonical_id);
  CHECK(ia == ib);
  CHECK(ia.size() == census().shapes.size());
}

TEST_CASE("census svg") {
  const std::string svg = census_svg(census());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("shape-62") != std::string::npos);
  CHECK(svg == census_svg(census()));
}
