#include "hurwitz/census.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <map>
#include <set>

namespace hurwitz {

namespace {

std::vector<GaussInt> digit_set(long radius) {
  std::vector<GaussInt> out;
  for (long x = -radius; x <= radius; ++x)
    for (long y = -radius; y <= radius; ++y)
      if (x * x + y * y >= 2) out.emplace_back(x, y);
  return out;
}

std::string face_bits(const Region& r) {
  const Atlas& atlas = Atlas::instance();
  const CellSet f = atlas.cells_of(r) & atlas.faces();
  std::string s;
  for (std::size_t i = 0; i < atlas.cells().size(); ++i)
    if (atlas.faces().test(i)) s += f.test(i) ? '1' : '0';
  return s;
}

}  // namespace

std::string interior_class_key(const Region& r) {
  const Region c = canonicalize(r);
  if (c.empty) return {};
  std::string best;
  for (int k = 0; k < 4; ++k) {
    const Region rk = canonicalize(rotate(c, k));
    std::string bits = face_bits(rk);
    if (bits.find('1') == std::string::npos) return {};
    if (best.empty() || bits < best) best = std::move(bits);
  }
  return best;
}

CensusReport prototype_census(std::size_t max_depth, std::size_t cap, long digit_radius) {
  if (max_depth == 0) throw InvalidArgument("census depth must be >= 1");
  CensusReport rep;
  rep.max_depth = max_depth;
  rep.digit_radius = digit_radius;
  rep.cap = cap;

  const std::vector<GaussInt> digits = digit_set(digit_radius);
  std::map<std::string, std::size_t> seen;
  std::vector<Region> frontier_regions = {canonicalize(base_region_F())};
  std::vector<std::vector<GaussInt>> frontier_witness = {{}};

  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    const std::size_t n_parent = frontier_regions.size();
    const std::size_t n_jobs = n_parent * digits.size();
    std::vector<Region> children(n_jobs);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t job = 0; job < n_jobs; ++job) {
      try {
        children[job] = cylinder_step(frontier_regions[job / digits.size()], digits[job % digits.size()]);
      } catch (...) {
#pragma omp critical(census_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<Region> next_regions;
    std::vector<std::vector<GaussInt>> next_witness;
    std::size_t fresh = 0;
    for (std::size_t job = 0; job < n_jobs; ++job) {
      const Region& child = children[job];
      if (child.empty) continue;
      const std::string& id = *child.canonical_id;
      if (seen.count(id)) continue;
      seen.emplace(id, rep.shapes.size());
      CensusShape s;
      s.region = child;
      s.kind = region_classify(child).kind;
      s.area = region_area(child);
      s.first_depth = depth;
      s.witness = frontier_witness[job / digits.size()];
      s.witness.push_back(digits[job % digits.size()]);
      s.class_key = interior_class_key(child);
      rep.shapes.push_back(std::move(s));
      next_regions.push_back(child);
      next_witness.push_back(rep.shapes.back().witness);
      ++fresh;
      if (rep.shapes.size() > cap) {
        throw BudgetExceeded("census exceeded " + std::to_string(cap) + " shapes at depth " + std::to_string(depth));
      }
    }
    rep.new_per_depth.push_back(fresh);
    if (fresh == 0) {
      rep.stabilized = true;
      rep.stabilization_depth = depth;
      break;
    }
    frontier_regions = std::move(next_regions);
    frontier_witness = std::move(next_witness);
  }

  // Depth-one statistics over |a| in {sqrt 2, 2, sqrt 5}.
  const Region f = canonicalize(base_region_F());
  std::set<std::string> forms, classes;
  for (const GaussInt& a : digit_set(2)) {
    const BigInt n = abs_sq(a);
    if (n != 2 && n != 4 && n != 5) continue;
    const Region r = cylinder_step(f, a);
    if (r.empty) continue;
    forms.insert(*r.canonical_id);
    if (region_classify(r).kind != Classification::Kind::full_square) {
      const std::string key = interior_class_key(r);
      if (!key.empty()) classes.insert(key);
    }
  }
  rep.depth1_forms = forms.size();
  rep.depth1_classes = classes.size();
  rep.depth1_classes_with_full = classes.size() + 1;

  std::set<std::string> all_classes;
  bool have_area = false;
  for (const CensusShape& s : rep.shapes) {
    if (s.kind == Classification::Kind::proper && !s.class_key.empty()) all_classes.insert(s.class_key);
    if (s.kind == Classification::Kind::proper || s.kind == Classification::Kind::full_square) {
      if (!have_area || s.area.lo < rep.min_regular_area) rep.min_regular_area = s.area.lo;
      have_area = true;
    }
  }
  rep.interior_classes = all_classes.size();
  return rep;
}

std::string census_svg(const CensusReport& report) {
  constexpr int kGlyph = 96, kPad = 12, kPerRow = 8, kGrid = 48;
  const int n = static_cast<int>(report.shapes.size());
  const int rows = (n + kPerRow - 1) / kPerRow;
  const int width = kPerRow * (kGlyph + kPad) + kPad;
  const int height = rows * (kGlyph + kPad + 14) + kPad;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n", width,
                height, width, height);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  constexpr int cell = kGlyph / kGrid;
  for (int i = 0; i < n; ++i) {
    const CensusShape& s = report.shapes[static_cast<std::size_t>(i)];
    const int ox = kPad + (i % kPerRow) * (kGlyph + kPad);
    const int oy = kPad + (i / kPerRow) * (kGlyph + kPad + 14);
    std::snprintf(buf, sizeof buf, "<g id=\"shape-%d\">\n<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"#888\"/>\n",
                  i, ox, oy, kGlyph, kGlyph);
    out += buf;
    // Pixel centers ((2u+1) / (2 kGrid) - 1/2) are exact rationals. Each run
    // of covered pixels in a raster row becomes one path segment.
    std::string path;
    for (int v = 0; v < kGrid; ++v) {
      int u = 0;
      while (u < kGrid) {
        auto inside = [&](int uu) {
          return contains(s.region, GaussRational::from_parts(BigInt(2 * uu + 1 - kGrid), BigInt(kGrid - 1 - 2 * v),
                                                              BigInt(2 * kGrid)));
        };
        if (!inside(u)) {
          ++u;
          continue;
        }
        const int start = u;
        while (u < kGrid && inside(u)) ++u;
        std::snprintf(buf, sizeof buf, "M%d %dh%dv%dh%dz", ox + start * cell, oy + v * cell, (u - start) * cell, cell,
                      -(u - start) * cell);
        path += buf;
      }
    }
    if (!path.empty()) out += "<path fill=\"#36c\" d=\"" + path + "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"10\" font-family=\"monospace\">%d d%zu %s</text>\n</g>\n",
                  ox, oy + kGlyph + 11, i, s.first_depth, to_string(s.kind).c_str());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hurwitz
