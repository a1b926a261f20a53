#include "hurwitz/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace hurwitz {

namespace {

using Op = Constraint::Op;
using Side = Constraint::Side;

const std::array<GaussInt, 8>& circle_centers() {
  static const std::array<GaussInt, 8> c = {GaussInt(1, 0),  GaussInt(0, 1),   GaussInt(-1, 0), GaussInt(0, -1),
                                            GaussInt(1, 1),  GaussInt(-1, 1),  GaussInt(-1, -1), GaussInt(1, -1)};
  return c;
}

std::optional<std::size_t> center_index(const GaussInt& c) {
  const auto& cs = circle_centers();
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (cs[i] == c) return i;
  return std::nullopt;
}

// u = i^unit as a Gaussian integer.
GaussInt unit_value(int unit) { return mul_i_pow(GaussInt(1), unit); }

int unit_of(const GaussInt& u) {
  for (int k = 0; k < 4; ++k)
    if (unit_value(k) == u) return k;
  throw InvariantViolation("not a unit: " + u.to_string());
}

Op flip(Op op) {
  switch (op) {
    case Op::ge: return Op::le;
    case Op::gt: return Op::lt;
    case Op::le: return Op::ge;
    case Op::lt: return Op::gt;
  }
  return op;
}

bool op_holds(Op op, int s) {
  switch (op) {
    case Op::ge: return s >= 0;
    case Op::gt: return s > 0;
    case Op::le: return s <= 0;
    case Op::lt: return s < 0;
  }
  return false;
}

// s = sign(|z - c|^2 - 1)
bool side_holds(Side side, int s) {
  switch (side) {
    case Side::inside_closed: return s <= 0;
    case Side::inside_open: return s < 0;
    case Side::outside_closed: return s >= 0;
    case Side::outside_open: return s > 0;
  }
  return false;
}

// |w - u| <= 1  <=>  Re(u / w) >= 1/2 for a unit u, and likewise per side.
Op op_for_side(Side s) {
  switch (s) {
    case Side::inside_closed: return Op::ge;
    case Side::inside_open: return Op::gt;
    case Side::outside_closed: return Op::le;
    case Side::outside_open: return Op::lt;
  }
  return Op::ge;
}

Side side_for_op(Op op) {
  switch (op) {
    case Op::ge: return Side::inside_closed;
    case Op::gt: return Side::inside_open;
    case Op::le: return Side::outside_closed;
    case Op::lt: return Side::outside_open;
  }
  return Side::inside_closed;
}

const char* op_text(Op op) {
  switch (op) {
    case Op::ge: return ">=";
    case Op::gt: return ">";
    case Op::le: return "<=";
    case Op::lt: return "<";
  }
  return "?";
}

// Re(u z) for u = i^unit.
BigRational re_unit_times(int unit, const BigRational& x, const BigRational& y) {
  switch (unit & 3) {
    case 0: return x;
    case 1: return -y;
    case 2: return -x;
    default: return y;
  }
}

BigInt re_unit_times(int unit, const GaussInt& t) {
  switch (unit & 3) {
    case 0: return t.re;
    case 1: return -t.im;
    case 2: return -t.re;
    default: return t.im;
  }
}

// Outcome of deciding a constraint on the closed square.
enum class Decided { keep, vacuous, empty };

Decided decide_disk(const Constraint& c) {
  const BigInt n = abs_sq(c.center);
  const bool inside = c.side == Side::inside_closed || c.side == Side::inside_open;
  if (n == 0) return inside ? Decided::vacuous : Decided::empty;  // the unit disk covers the square
  // |c| > 1 + 1/sqrt 2  <=>  2|c|^2 > 3 + 2 sqrt 2: the disk misses the square.
  if (sign_plus_sqrt2(BigRational(2 * n - 3), BigRational(-2)) > 0) return inside ? Decided::empty : Decided::vacuous;
  return Decided::keep;
}

// Re(u z) ranges over [-1/2, 1/2] on the closed square.
Decided decide_halfplane(const Constraint& c) {
  if (c.h2 >= 3) return (c.op == Op::ge || c.op == Op::gt) ? Decided::empty : Decided::vacuous;
  if (c.h2 <= -3) return (c.op == Op::ge || c.op == Op::gt) ? Decided::vacuous : Decided::empty;
  return Decided::keep;
}

// Re(u z) op -1/2  <=>  Re(-u z) flip(op) 1/2
Constraint normalize_halfplane(const Constraint& c) {
  if (c.h2 == -1) return Constraint::halfplane((c.unit + 2) & 3, flip(c.op), 1);
  return c;
}

// ---------------------------------------------------------------------------
// Q(sqrt 3)

QS qs(const BigRational& a) { return {a, 0}; }
QS operator+(const QS& p, const QS& q) { return {p.a + q.a, p.b + q.b}; }
QS operator-(const QS& p, const QS& q) { return {p.a - q.a, p.b - q.b}; }
QS operator*(const QS& p, const QS& q) { return {p.a * q.a + 3 * p.b * q.b, p.a * q.b + p.b * q.a}; }
int sign(const QS& v) { return sign_plus_sqrt3(v.a, v.b); }
bool operator==(const QS& p, const QS& q) { return p.a == q.a && p.b == q.b; }
long double to_ld(const QS& v) {
  return static_cast<long double>(v.a.get_d()) + static_cast<long double>(v.b.get_d()) * std::sqrt(3.0L);
}

std::optional<BigRational> rational_sqrt(const BigRational& r) {
  if (r < 0) return std::nullopt;
  BigInt n = r.get_num(), d = r.get_den(), sn, sd;
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  return BigRational(sn, sd);
}

// sqrt(r) when it lies in Q(sqrt 3).
QS qs_sqrt(const BigRational& r) {
  if (auto s = rational_sqrt(r)) return {*s, 0};
  if (auto s = rational_sqrt(r / 3)) return {0, *s};
  throw InvariantViolation("square root outside Q(sqrt 3)");
}

constexpr std::size_t kCurves = 12;

// Curves 0..3: x = -1/2, x = 1/2, y = -1/2, y = 1/2 (value x + 1/2, ...);
// curves 4..11: unit circles at circle_centers() (value |p - c|^2 - 1).
QS curve_value(std::size_t k, const QS& x, const QS& y) {
  const BigRational half(1, 2);
  switch (k) {
    case 0: return x + qs(half);
    case 1: return x - qs(half);
    case 2: return y + qs(half);
    case 3: return y - qs(half);
    default: {
      const GaussInt& c = circle_centers()[k - 4];
      const QS dx = x - qs(BigRational(c.re));
      const QS dy = y - qs(BigRational(c.im));
      return dx * dx + dy * dy - qs(BigRational(1));
    }
  }
}

long double curve_value_ld(std::size_t k, long double x, long double y) {
  switch (k) {
    case 0: return x + 0.5L;
    case 1: return x - 0.5L;
    case 2: return y + 0.5L;
    case 3: return y - 0.5L;
    default: {
      const GaussInt& c = circle_centers()[k - 4];
      const long double dx = x - c.re.get_d();
      const long double dy = y - c.im.get_d();
      return dx * dx + dy * dy - 1.0L;
    }
  }
}

std::vector<int> signs_at(const QS& x, const QS& y) {
  std::vector<int> s(kCurves);
  for (std::size_t k = 0; k < kCurves; ++k) s[k] = sign(curve_value(k, x, y));
  return s;
}

bool in_closed_square(const std::vector<int>& s) { return s[0] >= 0 && s[1] <= 0 && s[2] >= 0 && s[3] <= 0; }

struct Pt {
  QS x;
  QS y;
};

// Intersections of two curves (exact, in Q(sqrt 3)).
std::vector<Pt> intersect_curves(std::size_t a, std::size_t b) {
  const BigRational half(1, 2);
  auto line_coord = [&](std::size_t k) { return (k % 2 == 0) ? -half : half; };
  auto vertical = [](std::size_t k) { return k < 2; };
  std::vector<Pt> out;
  if (a > b) std::swap(a, b);
  if (b < 4) {
    if (vertical(a) == vertical(b)) return out;
    const BigRational x = line_coord(a), y = line_coord(b);
    out.push_back({qs(x), qs(y)});
    return out;
  }
  const GaussInt& cb = circle_centers()[b - 4];
  if (a < 4) {
    const BigRational h = line_coord(a);
    const BigRational ctr = vertical(a) ? BigRational(cb.re) : BigRational(cb.im);
    const BigRational other = vertical(a) ? BigRational(cb.im) : BigRational(cb.re);
    const BigRational r = 1 - (h - ctr) * (h - ctr);
    if (r < 0) return out;
    const QS s = qs_sqrt(r);
    for (int sgn : {-1, 1}) {
      if (r == 0 && sgn > 0) break;
      const QS t = qs(other) + QS{sgn * s.a, sgn * s.b};
      out.push_back(vertical(a) ? Pt{qs(h), t} : Pt{t, qs(h)});
    }
    return out;
  }
  const GaussInt& ca = circle_centers()[a - 4];
  const GaussInt d = cb - ca;
  const BigInt dd = abs_sq(d);
  if (dd > 4 || dd == 0) return out;
  BigRational mx(ca.re + cb.re, 2), my(ca.im + cb.im, 2);
  mx.canonicalize();
  my.canonicalize();
  BigRational f2(4 - dd, 4 * dd);
  f2.canonicalize();
  const QS f = qs_sqrt(f2);
  for (int sgn : {-1, 1}) {
    if (dd == 4 && sgn > 0) break;
    const QS px = qs(mx) + QS{sgn * f.a, sgn * f.b} * qs(BigRational(-d.im));
    const QS py = qs(my) + QS{sgn * f.a, sgn * f.b} * qs(BigRational(d.re));
    out.push_back({px, py});
  }
  return out;
}

BigRational rational_near(long double v) {
  const long double scale = 1073741824.0L;  // 2^30
  BigInt n;
  mpz_set_d(n.get_mpz_t(), static_cast<double>(std::llround(v * scale)));
  BigRational r(n, BigInt(1073741824));
  r.canonicalize();
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constraint

Constraint Constraint::halfplane(int unit, Op op, BigInt h2) {
  Constraint c;
  c.kind = Kind::halfplane;
  c.unit = ((unit % 4) + 4) % 4;
  c.op = op;
  c.h2 = std::move(h2);
  return c;
}

Constraint Constraint::disk(GaussInt center, Side side) {
  Constraint c;
  c.kind = Kind::disk;
  c.center = std::move(center);
  c.side = side;
  c.h2 = 0;
  return c;
}

bool operator==(const Constraint& a, const Constraint& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Constraint::Kind::halfplane) return a.unit == b.unit && a.op == b.op && a.h2 == b.h2;
  return a.center == b.center && a.side == b.side;
}

std::string Constraint::axis() const { return (unit % 2 == 0) ? "re" : "im"; }

// Re z = Re(u z) for u = 1; Re(-z) op h <=> Re z flip(op) -h; Re(-iz) = Im z;
// Re(iz) = -Im z.
std::string Constraint::sense() const { return op_text((unit == 0 || unit == 3) ? op : flip(op)); }

BigRational Constraint::bound() const {
  const BigRational h(h2, 2);
  return (unit == 0 || unit == 3) ? h : BigRational(-h);
}

std::string Constraint::to_string() const {
  if (kind == Kind::halfplane) {
    std::string b = bound().get_str();
    return std::string(axis() == "re" ? "Re" : "Im") + sense() + b;
  }
  std::string c;
  if (center.is_zero()) {
    c = "|z|";
  } else {
    const GaussInt neg = -center;
    std::string s = neg.to_string();
    const bool simple = sgn(center.re) == 0 || sgn(center.im) == 0;
    if (simple) {
      c = "|z" + std::string(s[0] == '-' ? "" : "+") + s + "|";
    } else {
      c = "|z-(" + center.to_string() + ")|";
    }
  }
  switch (side) {
    case Side::inside_closed: return c + "<=1";
    case Side::inside_open: return c + "<1";
    case Side::outside_closed: return c + ">=1";
    case Side::outside_open: return c + ">1";
  }
  return c;
}

std::string to_string(Constraint::Side s) {
  switch (s) {
    case Side::inside_closed: return "inside-closed";
    case Side::inside_open: return "inside-open";
    case Side::outside_closed: return "outside-closed";
    case Side::outside_open: return "outside-open";
  }
  return "?";
}

bool Constraint::is_closed() const {
  if (kind == Kind::halfplane) return op == Op::ge || op == Op::le;
  return side == Side::inside_closed || side == Side::outside_closed;
}

Constraint Constraint::opened() const {
  Constraint c = *this;
  if (kind == Kind::halfplane) {
    if (op == Op::ge) c.op = Op::gt;
    if (op == Op::le) c.op = Op::lt;
  } else {
    if (side == Side::inside_closed) c.side = Side::inside_open;
    if (side == Side::outside_closed) c.side = Side::outside_open;
  }
  return c;
}

std::optional<std::size_t> family_index(const Constraint& c) {
  if (c.kind == Constraint::Kind::halfplane) {
    if (c.h2 != 1) return std::nullopt;
    return static_cast<std::size_t>(c.unit) * 4 + static_cast<std::size_t>(c.op);
  }
  auto ci = center_index(c.center);
  if (!ci) return std::nullopt;
  return 16 + *ci * 4 + static_cast<std::size_t>(c.side);
}

Constraint family_member(std::size_t index) {
  if (index < 16) return Constraint::halfplane(static_cast<int>(index / 4), static_cast<Op>(index % 4));
  const std::size_t j = index - 16;
  return Constraint::disk(circle_centers().at(j / 4), static_cast<Side>(j % 4));
}

// ---------------------------------------------------------------------------
// Region operations

Region Region::make_empty() {
  Region r;
  r.empty = true;
  r.canonical_id = "empty";
  return r;
}

bool satisfies(const Constraint& c, const GaussRational& z) {
  const BigRational x = z.real(), y = z.imag();
  if (c.kind == Constraint::Kind::halfplane) {
    BigRational h(c.h2, 2);
    h.canonicalize();
    const BigRational v = re_unit_times(c.unit, x, y) - h;
    return op_holds(c.op, sgn(v));
  }
  const BigRational dx = x - BigRational(c.center.re), dy = y - BigRational(c.center.im);
  return side_holds(c.side, sgn(dx * dx + dy * dy - 1));
}

bool contains(const Region& r, const GaussRational& z) {
  if (r.empty) return false;
  return std::all_of(r.constraints.begin(), r.constraints.end(), [&](const Constraint& c) { return satisfies(c, z); });
}

Region base_region_F() {
  Region r;
  r.constraints = {Constraint::halfplane(2, Op::le),   // Re(-z) <= 1/2
                   Constraint::halfplane(0, Op::lt),   // Re z < 1/2
                   Constraint::halfplane(1, Op::le),   // Re(iz) <= 1/2
                   Constraint::halfplane(3, Op::lt)};  // Re(-iz) < 1/2
  return r;
}

Region inv_region(const Region& r) {
  if (r.empty) return Region::make_empty();
  Region out;
  for (const Constraint& raw : r.constraints) {
    if (raw.kind == Constraint::Kind::halfplane) {
      const Constraint c = normalize_halfplane(raw);
      if (c.h2 != 1) {
        switch (decide_halfplane(c)) {
          case Decided::empty: return Region::make_empty();
          case Decided::vacuous: continue;
          case Decided::keep: break;
        }
      }
      if (c.h2 != 1) throw UnsupportedConstraint("cannot invert " + c.to_string());
      out.constraints.push_back(Constraint::disk(unit_value(c.unit), side_for_op(c.op)));
      continue;
    }
    const BigInt n = abs_sq(raw.center);
    if (n == 1) {
      out.constraints.push_back(Constraint::halfplane(unit_of(raw.center), op_for_side(raw.side)));
    } else if (n == 2) {
      out.constraints.push_back(Constraint::disk(raw.center.conj(), raw.side));
    } else {
      switch (decide_disk(raw)) {
        case Decided::empty: return Region::make_empty();
        case Decided::vacuous: continue;
        case Decided::keep: throw UnsupportedConstraint("cannot invert " + raw.to_string());
      }
    }
  }
  return out;
}

Region translate(const Region& r, const GaussInt& t) {
  if (r.empty) return Region::make_empty();
  Region out;
  out.constraints.reserve(r.constraints.size());
  for (const Constraint& c : r.constraints) {
    if (c.kind == Constraint::Kind::halfplane) {
      out.constraints.push_back(Constraint::halfplane(c.unit, c.op, c.h2 + 2 * re_unit_times(c.unit, t)));
    } else {
      out.constraints.push_back(Constraint::disk(c.center + t, c.side));
    }
  }
  return out;
}

Region intersect(const Region& a, const Region& b) {
  if (a.empty || b.empty) return Region::make_empty();
  Region out;
  out.constraints = a.constraints;
  for (const Constraint& c : b.constraints)
    if (std::find(out.constraints.begin(), out.constraints.end(), c) == out.constraints.end())
      out.constraints.push_back(c);
  return out;
}

Region prune(const Region& r) {
  if (r.empty) return Region::make_empty();
  Region out;
  for (const Constraint& raw : r.constraints) {
    Constraint c = raw.kind == Constraint::Kind::halfplane ? normalize_halfplane(raw) : raw;
    const Decided d = c.kind == Constraint::Kind::halfplane ? decide_halfplane(c) : decide_disk(c);
    if (d == Decided::empty) return Region::make_empty();
    if (d == Decided::vacuous) continue;
    if (std::find(out.constraints.begin(), out.constraints.end(), c) == out.constraints.end())
      out.constraints.push_back(std::move(c));
  }
  return out;
}

Region rotate(const Region& r, int k) {
  if (r.empty) return Region::make_empty();
  Region out;
  for (const Constraint& c : r.constraints) {
    if (c.kind == Constraint::Kind::halfplane) {
      out.constraints.push_back(Constraint::halfplane(c.unit - k, c.op, c.h2));
    } else {
      out.constraints.push_back(Constraint::disk(mul_i_pow(c.center, k), c.side));
    }
  }
  return out;
}

Region interior(const Region& r) {
  if (r.empty) return Region::make_empty();
  Region out;
  for (const Constraint& c : r.constraints) out.constraints.push_back(c.opened());
  return out;
}

Region canonicalize(const Region& r) {
  const Region p = prune(r);
  if (p.empty) return Region::make_empty();
  const Atlas& atlas = Atlas::instance();
  const CellSet s = atlas.cells_of(p);
  if (s.none()) return Region::make_empty();
  std::vector<std::size_t> keep;
  std::vector<CellSet> masks;
  for (std::size_t i = 0; i < kFamilySize; ++i) {
    const CellSet m = atlas.mask(family_member(i));
    if ((s & ~m).none()) {
      keep.push_back(i);
      masks.push_back(m);
    }
  }
  // F's own edges are never dropped: inversion needs the full box, and
  // within the closed square they would otherwise count as redundant.
  std::vector<bool> pinned(keep.size(), false);
  for (const Constraint& f : base_region_F().constraints)
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (keep[j] == *family_index(f)) pinned[j] = true;
  std::vector<bool> active(keep.size(), true);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    if (pinned[j]) continue;
    active[j] = false;
    CellSet rest = atlas.all();
    for (std::size_t t = 0; t < keep.size(); ++t)
      if (active[t]) rest &= masks[t];
    if (rest != s) active[j] = true;
  }
  Region out;
  std::string id;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    if (!active[j]) continue;
    out.constraints.push_back(family_member(keep[j]));
    if (!id.empty()) id += " & ";
    id += out.constraints.back().to_string();
  }
  out.canonical_id = id;
  return out;
}

Region cylinder_step(const Region& r, const GaussInt& b) {
  if (r.empty) return Region::make_empty();
  return canonicalize(intersect(translate(inv_region(r), -b), base_region_F()));
}

Region cylinder_region(const std::vector<GaussInt>& digits) {
  Region r = canonicalize(base_region_F());
  for (const GaussInt& b : digits) {
    r = cylinder_step(r, b);
    if (r.empty) break;
  }
  return r;
}

std::string to_string(Classification::Kind k) {
  switch (k) {
    case Classification::Kind::empty: return "empty";
    case Classification::Kind::degenerate: return "degenerate";
    case Classification::Kind::full_square: return "full-square";
    case Classification::Kind::proper: return "proper";
  }
  return "?";
}

Classification region_classify(const Region& r) {
  const Region c = canonicalize(r);
  Classification out;
  out.canonical_id = c.canonical_id.value_or("empty");
  if (c.empty) return out;
  const Atlas& atlas = Atlas::instance();
  const CellSet s = atlas.cells_of(c);
  const CellSet f = s & atlas.faces();
  if (f.none()) {
    out.kind = Classification::Kind::degenerate;
  } else if (f == atlas.faces()) {
    out.kind = Classification::Kind::full_square;
  } else {
    out.kind = Classification::Kind::proper;
  }
  return out;
}

bool is_regular(const std::vector<GaussInt>& digits) {
  Region r = canonicalize(base_region_F());
  for (const GaussInt& b : digits) {
    r = cylinder_step(r, b);
    const auto k = region_classify(r).kind;
    if (k != Classification::Kind::full_square && k != Classification::Kind::proper) return false;
  }
  return true;
}

Interval region_area(const Region& r) {
  const Region c = canonicalize(r);
  if (c.empty) return {0.0, 0.0};
  const Atlas& atlas = Atlas::instance();
  const CellSet f = atlas.cells_of(c) & atlas.faces();
  if (f == atlas.faces()) return {1.0, 1.0};
  long double sum = 0.0L;
  std::size_t count = 0;
  for (std::size_t i = 0; i < atlas.cells().size(); ++i) {
    if (!f.test(i)) continue;
    sum += atlas.face_area()[i];
    ++count;
  }
  // The closed-form slab integrals are accurate to ~1e-18 per face.
  const double pad = 1e-12 * static_cast<double>(count);
  return {std::max(0.0, static_cast<double>(sum) - pad), std::min(1.0, static_cast<double>(sum) + pad)};
}

std::size_t shell_count(const Region& r, long m) {
  const Region c = canonicalize(r);
  if (c.empty || m <= 0) return 0;
  const Region inv = inv_region(c);
  if (inv.empty) return 0;
  std::size_t count = 0;
  auto member = [&](long x, long y) {
    for (const Constraint& k : inv.constraints) {
      if (k.kind == Constraint::Kind::halfplane) {
        // Re(u b) op h2 / 2  <=>  2 Re(u b) op h2
        const BigInt v = 2 * re_unit_times(k.unit, GaussInt(x, y)) - k.h2;
        if (!op_holds(k.op, sgn(v))) return false;
      } else {
        const BigInt dx = BigInt(x) - k.center.re, dy = BigInt(y) - k.center.im;
        const BigInt v = dx * dx + dy * dy - 1;
        if (!side_holds(k.side, sgn(v))) return false;
      }
    }
    return true;
  };
  for (long x = -m; x <= m; ++x) {
    for (long y = -m; y <= m; ++y) {
      if (std::max(std::labs(x), std::labs(y)) != m) continue;
      if (member(x, y)) ++count;
    }
  }
  return count;
}

bool contains_rotated_interior(const Region& outer, const Region& inner) {
  const Region o = canonicalize(outer);
  if (o.empty) return false;
  const Atlas& atlas = Atlas::instance();
  const CellSet so = atlas.cells_of(o);
  for (int k = 0; k < 4; ++k) {
    const Region in = canonicalize(interior(rotate(canonicalize(inner), k)));
    if (in.empty) continue;
    if ((atlas.cells_of(in) & ~so).none()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Atlas

const Atlas& Atlas::instance() {
  static const Atlas atlas;
  return atlas;
}

Atlas::Atlas() {
  build();
  masks_.reserve(kFamilySize);
  for (std::size_t i = 0; i < kFamilySize; ++i) {
    const Constraint c = family_member(i);
    CellSet m;
    for (std::size_t j = 0; j < cells_.size(); ++j) {
      const auto& s = cells_[j].signs;
      bool holds = false;
      if (c.kind == Constraint::Kind::halfplane) {
        // Re(u z) - 1/2 for u = 1, i, -1, -i is x - 1/2, -(y + 1/2), -(x + 1/2), y - 1/2.
        static constexpr int curve[4] = {1, 2, 0, 3};
        static constexpr int flip_sign[4] = {1, -1, -1, 1};
        holds = op_holds(c.op, flip_sign[c.unit] * s[static_cast<std::size_t>(curve[c.unit])]);
      } else {
        holds = side_holds(c.side, s[4 + *center_index(c.center)]);
      }
      if (holds) m.set(j);
    }
    masks_.push_back(m);
  }
  compute_areas();
}

std::optional<std::size_t> Atlas::lookup(const std::vector<int>& signs) const {
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].signs == signs) return i;
  return std::nullopt;
}

int Atlas::add_cell(const QS& x, const QS& y) {
  std::vector<int> s = signs_at(x, y);
  if (!in_closed_square(s)) return -1;
  if (auto i = lookup(s)) return static_cast<int>(*i);
  if (cells_.size() >= kMaxCells) throw InvariantViolation("cell capacity exceeded");
  const int zeros = static_cast<int>(std::count(s.begin(), s.end(), 0));
  Cell c;
  c.signs = std::move(s);
  c.dim = zeros == 0 ? 2 : (zeros == 1 ? 1 : 0);
  c.x = x;
  c.y = y;
  cells_.push_back(std::move(c));
  const std::size_t idx = cells_.size() - 1;
  all_.set(idx);
  if (cells_.back().dim == 2) faces_.set(idx);
  return static_cast<int>(idx);
}

void Atlas::build() {
  // Vertices, gathered per curve.
  std::vector<std::vector<Pt>> on_curve(kCurves);
  for (std::size_t a = 0; a < kCurves; ++a) {
    for (std::size_t b = a + 1; b < kCurves; ++b) {
      for (const Pt& p : intersect_curves(a, b)) {
        if (!in_closed_square(signs_at(p.x, p.y))) continue;
        add_cell(p.x, p.y);
        for (std::size_t k : {a, b}) {
          auto& v = on_curve[k];
          if (std::none_of(v.begin(), v.end(), [&](const Pt& q) { return q.x == p.x && q.y == p.y; })) v.push_back(p);
        }
      }
    }
  }

  // One witness per edge: midpoints between consecutive vertices on each curve.
  struct EdgeWitness {
    std::size_t curve;
    Pt p;
  };
  std::vector<EdgeWitness> edges;
  const BigRational half(1, 2);
  for (std::size_t k = 0; k < kCurves; ++k) {
    auto& v = on_curve[k];
    if (k < 4) {
      const bool vertical = k < 2;
      std::sort(v.begin(), v.end(), [&](const Pt& p, const Pt& q) {
        return vertical ? sign(p.y - q.y) < 0 : sign(p.x - q.x) < 0;
      });
      for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        Pt m = v[j];
        if (vertical) {
          m.y = QS{(v[j].y.a + v[j + 1].y.a) * half, (v[j].y.b + v[j + 1].y.b) * half};
        } else {
          m.x = QS{(v[j].x.a + v[j + 1].x.a) * half, (v[j].x.b + v[j + 1].x.b) * half};
        }
        edges.push_back({k, m});
      }
      continue;
    }
    const GaussInt& c = circle_centers()[k - 4];
    const long double cx = c.re.get_d(), cy = c.im.get_d();
    std::vector<long double> angles;
    for (const Pt& p : v) angles.push_back(std::atan2(to_ld(p.y) - cy, to_ld(p.x) - cx));
    std::sort(angles.begin(), angles.end());
    for (std::size_t j = 0; j < angles.size(); ++j) {
      const long double a0 = angles[j];
      long double a1 = angles[(j + 1) % angles.size()];
      if (j + 1 == angles.size()) a1 += 2 * std::numbers::pi_v<long double>;
      const long double mid = 0.5L * (a0 + a1);
      // A rational point on the circle near angle `mid`.
      const bool back = std::cos(mid) < -0.5L;
      const long double t = std::tan(back ? (mid - std::numbers::pi_v<long double>) / 2 : mid / 2);
      const BigRational tq = rational_near(t);
      const BigRational den = 1 + tq * tq;
      BigRational ux = (1 - tq * tq) / den, uy = 2 * tq / den;
      if (back) {
        ux = -ux;
        uy = -uy;
      }
      const Pt p{qs(BigRational(c.re) + ux), qs(BigRational(c.im) + uy)};
      const auto s = signs_at(p.x, p.y);
      if (!in_closed_square(s)) continue;
      if (s[k] != 0 || std::count(s.begin(), s.end(), 0) != 1) {
        std::string d;
        for (int q : s) d += std::to_string(q) + " ";
        throw InvariantViolation("bad arc witness k=" + std::to_string(k) + " mid=" + std::to_string((double)mid) + " signs " + d);
      }
      edges.push_back({k, p});
    }
  }

  // Faces: probe both sides of every edge.
  for (const EdgeWitness& e : edges) {
    const int idx = add_cell(e.p.x, e.p.y);
    if (idx < 0) throw InvariantViolation("edge witness outside the square");
    const std::vector<int> base = cells_[static_cast<std::size_t>(idx)].signs;
    QS nx, ny;
    if (e.curve < 2) {
      nx = qs(BigRational(1));
      ny = qs(BigRational(0));
    } else if (e.curve < 4) {
      nx = qs(BigRational(0));
      ny = qs(BigRational(1));
    } else {
      const GaussInt& c = circle_centers()[e.curve - 4];
      nx = e.p.x - qs(BigRational(c.re));
      ny = e.p.y - qs(BigRational(c.im));
    }
    for (int dir : {-1, 1}) {
      BigRational eps(dir, 256);
      bool found = false;
      for (int iter = 0; iter < 80 && !found; ++iter, eps /= 2) {
        const QS px = e.p.x + nx * qs(eps), py = e.p.y + ny * qs(eps);
        const auto s = signs_at(px, py);
        bool ok = s[e.curve] != 0;
        for (std::size_t k = 0; k < kCurves && ok; ++k)
          if (k != e.curve && s[k] != base[k]) ok = false;
        if (!ok) continue;
        found = true;
        if (in_closed_square(s)) add_cell(px, py);
      }
      if (!found) throw InvariantViolation("face probe did not converge");
    }
  }
}

void Atlas::compute_areas() {
  face_area_.assign(cells_.size(), 0.0L);
  const long double a = 1.0L - std::sqrt(3.0L) / 2.0L;
  const std::array<long double, 5> xs = {-0.5L, -a, 0.0L, a, 0.5L};
  // Antiderivative of sqrt(1 - u^2).
  auto G = [](long double u) {
    u = std::clamp(u, -1.0L, 1.0L);
    return 0.5L * (u * std::sqrt(1.0L - u * u) + std::asin(u));
  };
  struct Branch {
    long double y_mid;
    long double integral;  // over the slab
  };
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    const long double x0 = xs[s], x1 = xs[s + 1], xm = 0.5L * (x0 + x1), w = x1 - x0;
    std::vector<Branch> br = {{-0.5L, -0.5L * w}, {0.5L, 0.5L * w}};
    for (const GaussInt& c : circle_centers()) {
      const long double cx = c.re.get_d(), cy = c.im.get_d();
      const long double u = xm - cx;
      if (std::fabs(u) >= 1.0L) continue;
      const long double root = std::sqrt(1.0L - u * u);
      for (int sg : {-1, 1}) {
        const long double y = cy + sg * root;
        if (y <= -0.5L || y >= 0.5L) continue;
        br.push_back({y, cy * w + sg * (G(x1 - cx) - G(x0 - cx))});
      }
    }
    std::sort(br.begin(), br.end(), [](const Branch& p, const Branch& q) { return p.y_mid < q.y_mid; });
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
      const long double ym = 0.5L * (br[j].y_mid + br[j + 1].y_mid);
      std::vector<int> sg(kCurves);
      for (std::size_t k = 0; k < kCurves; ++k) {
        const long double v = curve_value_ld(k, xm, ym);
        if (std::fabs(v) < 1e-9L) throw InvariantViolation("slab probe too close to a curve");
        sg[k] = v > 0 ? 1 : -1;
      }
      const auto idx = lookup(sg);
      if (!idx || cells_[*idx].dim != 2) throw InvariantViolation("slab piece without a face cell");
      face_area_[*idx] += br[j + 1].integral - br[j].integral;
    }
  }
}

CellSet Atlas::mask(const Constraint& c) const {
  auto i = family_index(c);
  if (!i) throw UnsupportedConstraint("constraint outside the family: " + c.to_string());
  return masks_[*i];
}

CellSet Atlas::cells_of(const Region& r) const {
  if (r.empty) return {};
  CellSet s = all_;
  for (const Constraint& c : r.constraints) s &= mask(c);
  return s;
}

}  // namespace hurwitz
