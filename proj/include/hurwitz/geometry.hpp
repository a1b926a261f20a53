#pragma once

#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hurwitz/exact.hpp"
#include "hurwitz/gaussian.hpp"

namespace hurwitz {

/// One constraint of a cylinder shape.
///
/// Halfplanes are written Re(u z) op h with u = i^unit and h = h2 / 2 a
/// half-integer; the normalized family only has h = 1/2, which covers the four
/// box edges (Re(iz) = -Im z, Re(-iz) = Im z). Disks are |z - center| vs 1.
struct Constraint {
  enum class Kind : unsigned char { halfplane, disk };
  enum class Op : unsigned char { ge, gt, le, lt };
  enum class Side : unsigned char { inside_closed, inside_open, outside_closed, outside_open };

  Kind kind = Kind::halfplane;
  int unit = 0;  // halfplane: u = i^unit, 0..3
  Op op = Op::ge;
  BigInt h2 = 1;  // halfplane bound times 2 (odd)
  GaussInt center;
  Side side = Side::inside_closed;

  static Constraint halfplane(int unit, Op op, BigInt h2 = 1);
  static Constraint disk(GaussInt center, Side side);

  /// Display form: "Re<1/2", "Im>=-1/2", "|z-(1+i)|>1".
  std::string to_string() const;
  /// Axis ("re"/"im"), sense and bound of a halfplane in coordinate form.
  std::string axis() const;
  std::string sense() const;
  BigRational bound() const;

  bool is_closed() const;
  /// The same constraint with a strict inequality.
  Constraint opened() const;

  friend bool operator==(const Constraint& a, const Constraint& b);
};

std::string to_string(Constraint::Side s);

/// Intersection of constraints. `empty` records that pruning already proved
/// the set empty. canonical_id is set by canonicalize().
struct Region {
  std::vector<Constraint> constraints;
  bool empty = false;
  std::optional<std::string> canonical_id;

  static Region make_empty();
};

/// Exact membership of a Gaussian rational.
bool contains(const Region& r, const GaussRational& z);
bool satisfies(const Constraint& c, const GaussRational& z);

/// F = [-1/2, 1/2)^2.
Region base_region_F();

/// The image of r under z -> 1/z. Requires r inside the closed square; disks
/// that miss or cover the closed square are decided first. Throws
/// UnsupportedConstraint for a disk whose image is not a unit disk or a
/// halfplane of the family.
Region inv_region(const Region& r);
/// {z + t : z in r}.
Region translate(const Region& r, const GaussInt& t);
Region intersect(const Region& a, const Region& b);
/// Decides every constraint that is constant on the closed square and
/// normalizes halfplane bounds to +1/2.
Region prune(const Region& r);
/// i^k * r.
Region rotate(const Region& r, int k);
/// Same region with every boundary removed.
Region interior(const Region& r);

/// One cylinder step: (inv(r) - b) intersected with F, pruned and canonical.
Region cylinder_step(const Region& r, const GaussInt& b);
/// Canonical F_n(a). Digits with |b|^2 < 2 simply produce Empty.
Region cylinder_region(const std::vector<GaussInt>& digits);

/// Region with a canonical, sorted, irredundant constraint list and its id.
Region canonicalize(const Region& r);

struct Classification {
  enum class Kind { empty, degenerate, full_square, proper };
  Kind kind = Kind::empty;
  std::string canonical_id;
};
std::string to_string(Classification::Kind k);

Classification region_classify(const Region& r);
bool is_regular(const std::vector<GaussInt>& digits);

/// Area as an interval of width well below 1e-6.
Interval region_area(const Region& r);

/// #{b : sup_norm(b) = m, b in inv(r)}, by integer arithmetic on the
/// inverted constraints.
std::size_t shell_count(const Region& r, long m);

/// Does some rotation i^k * int(inner) lie inside outer?
bool contains_rotated_interior(const Region& outer, const Region& inner);

// ---------------------------------------------------------------------------
// Exact cell decomposition of the closed square.
//
// Inside the closed square every constraint of the family is one of the four
// edge lines or a unit circle centred at +-1, +-i, +-1+-i. Points are
// grouped by their sign vector against these twelve curves; every region of
// the family is a union of such cells.

inline constexpr std::size_t kMaxCells = 512;
using CellSet = std::bitset<kMaxCells>;

/// a + b sqrt 3.
struct QS {
  BigRational a;
  BigRational b;
};

struct Cell {
  std::vector<int> signs;  // one entry per curve: -1, 0, +1
  int dim = 2;
  QS x;
  QS y;
};

class Atlas {
 public:
  static const Atlas& instance();

  const std::vector<Cell>& cells() const { return cells_; }
  const CellSet& faces() const { return faces_; }
  const CellSet& all() const { return all_; }
  /// Area of each face cell (0 for lower-dimensional cells).
  const std::vector<long double>& face_area() const { return face_area_; }

  /// Cells satisfying a normalized family constraint.
  CellSet mask(const Constraint& c) const;
  /// Cells of a pruned region (all constraints in the family).
  CellSet cells_of(const Region& r) const;

 private:
  Atlas();
  void build();
  void compute_areas();
  int add_cell(const QS& x, const QS& y);
  std::optional<std::size_t> lookup(const std::vector<int>& signs) const;

  std::vector<Cell> cells_;
  CellSet faces_;
  CellSet all_;
  std::vector<long double> face_area_;
  std::vector<CellSet> masks_;  // indexed by family_index
};

/// Index of a normalized constraint in the fixed 48-element family; nullopt
/// for constraints outside it.
std::optional<std::size_t> family_index(const Constraint& c);
Constraint family_member(std::size_t index);
inline constexpr std::size_t kFamilySize = 48;

}  // namespace hurwitz
