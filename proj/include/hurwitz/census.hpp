#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hurwitz/geometry.hpp"

namespace hurwitz {

struct CensusShape {
  Region region;  // canonical
  Classification::Kind kind = Classification::Kind::proper;
  Interval area;
  std::size_t first_depth = 0;
  std::vector<GaussInt> witness;  // first digit string (BFS order) producing it
  std::string class_key;          // interior shape modulo rotation; empty if no interior
};

struct CensusReport {
  std::size_t max_depth = 0;
  long digit_radius = 0;
  std::size_t cap = 0;
  std::vector<CensusShape> shapes;          // discovery order
  std::vector<std::size_t> new_per_depth;   // [d - 1] = shapes first seen at depth d
  bool stabilized = false;
  std::size_t stabilization_depth = 0;      // first depth that produced nothing new
  std::size_t depth1_forms = 0;             // distinct F_1(a), |a|^2 in {2, 4, 5}
  std::size_t depth1_classes = 0;           // their interiors modulo rotation
  std::size_t depth1_classes_with_full = 0; // same, counting the full square as a class
  std::size_t interior_classes = 0;         // over the whole census, full square excluded
  double min_regular_area = 0.0;            // lower end of the smallest regular area
};

/// Breadth-first search over digit extensions. Each distinct canonical shape
/// is expanded once with every digit of sup norm <= digit_radius; beyond
/// sup norm 4 a digit only moves every disk out of reach, so a radius of 6
/// realizes every child. Throws BudgetExceeded past `cap` shapes.
CensusReport prototype_census(std::size_t max_depth, std::size_t cap = 4096, long digit_radius = 6);

/// Key identifying the interior of r modulo rotation by i^k; empty when the
/// interior is empty.
std::string interior_class_key(const Region& r);

/// One glyph per shape, in census order.
std::string census_svg(const CensusReport& report);

}  // namespace hurwitz
