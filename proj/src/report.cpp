#include "hurwitz/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hurwitz {

namespace {

Json digits_json(const std::vector<GaussInt>& ds) {
  Json a = Json::array();
  for (const GaussInt& g : ds) a.push_back(g.to_string());
  return a;
}

std::string digits_text(const std::vector<GaussInt>& ds) {
  std::string s;
  for (std::size_t i = 0; i < ds.size(); ++i) s += (i ? " " : "") + ds[i].to_string();
  return s;
}

void dump(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      // Small objects of scalars (Gaussian integers, intervals) stay on one line.
      bool flat = j.size() <= 5;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        out += "{";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
          if (!first) out += ", ";
          first = false;
          out += Json(it.key()).dump() + ": ";
          dump(it.value(), out, indent + 1);
        }
        out += "}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default: out += j.dump(); return;
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) { return format_double(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return v != v ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_canonical(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_cell(t.header[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

Json envelope(const std::string& command, Json config, Json result, const std::string& verdict, double wall_seconds,
              int threads) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  j["verdict"] = verdict;
  j["metadata"] = Json{{"wall_seconds", wall_seconds}, {"threads", threads}};
  return j;
}

// ---------------------------------------------------------------------------

Json to_json(const GaussInt& g) { return Json{{"re", g.re.get_str()}, {"im", g.im.get_str()}}; }

Json to_json(const GaussRational& q) {
  return Json{{"re", q.num().re.get_str()}, {"im", q.num().im.get_str()}, {"den", q.den().get_str()}};
}

Json to_json(const DigitString& d) {
  Json ds = Json::array();
  for (const GaussInt& g : d.digits) ds.push_back(to_json(g));
  return Json{{"a0", to_json(d.a0)}, {"digits", ds}, {"terminated", d.terminated}};
}

Json to_json(const Interval& v) { return Json{{"lo", v.lo}, {"hi", v.hi}}; }

Json to_json(const ExactConstant& c) {
  return Json{{"expression", c.expression}, {"lo", c.value.lo}, {"hi", c.value.hi}};
}

Json to_json(const Proportion& p) {
  return Json{{"hits", p.hits}, {"trials", p.trials}, {"estimate", p.estimate}, {"ci_lo", p.lo}, {"ci_hi", p.hi}};
}

Json to_json(const Summary& s) {
  return Json{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"ci_lo", s.ci_lo}, {"ci_hi", s.ci_hi}};
}

Json to_json(const SampleSpec& s) {
  return Json{{"seed", s.seed}, {"count", s.count}, {"bits", s.bits}, {"depth", s.depth}};
}

Json to_json(const Constraint& c) {
  Json j;
  if (c.kind == Constraint::Kind::halfplane) {
    j["kind"] = "halfplane";
    j["axis"] = c.axis();
    j["sense"] = c.sense();
    j["bound"] = c.bound().get_str();
  } else {
    j["kind"] = "disk";
    j["center"] = to_json(c.center);
    j["side"] = to_string(c.side);
  }
  j["text"] = c.to_string();
  return j;
}

Json to_json(const Region& r) {
  Json cs = Json::array();
  for (const Constraint& c : r.constraints) cs.push_back(to_json(c));
  return Json{{"empty", r.empty}, {"canonical_id", r.canonical_id.value_or("")}, {"constraints", cs}};
}

Json to_json(const DerivedConstants& k) {
  return Json{{"kappa1", to_json(k.kappa1)}, {"kappa", to_json(k.kappa)},   {"kappa2", to_json(k.kappa2)},
              {"kappa3", to_json(k.kappa3)}, {"jac_lo", to_json(k.jac_lo)}, {"jac_hi", to_json(k.jac_hi)},
              {"a_min", to_json(k.a_min)},   {"c_tail", to_json(k.c_tail)}, {"c_bb", to_json(k.c_bb)}};
}

Json to_json(const CensusReport& r) {
  Json shapes = Json::array();
  for (std::size_t i = 0; i < r.shapes.size(); ++i) {
    const CensusShape& s = r.shapes[i];
    shapes.push_back(Json{{"index", i},
                          {"first_depth", s.first_depth},
                          {"kind", to_string(s.kind)},
                          {"area", to_json(s.area)},
                          {"witness", digits_json(s.witness)},
                          {"canonical_id", s.region.canonical_id.value_or("")},
                          {"class_key", s.class_key}});
  }
  return Json{{"max_depth", r.max_depth},
              {"digit_radius", r.digit_radius},
              {"cap", r.cap},
              {"shape_count", r.shapes.size()},
              {"new_per_depth", r.new_per_depth},
              {"stabilized", r.stabilized},
              {"stabilization_depth", r.stabilization_depth},
              {"depth1_forms", r.depth1_forms},
              {"depth1_interior_classes", r.depth1_classes},
              {"depth1_interior_classes_with_full_square", r.depth1_classes_with_full},
              {"interior_classes", r.interior_classes},
              {"min_regular_area", r.min_regular_area},
              {"shapes", shapes}};
}

Json to_json(const MeasureReport& r) {
  return Json{{"digits", digits_json(r.digits)},
              {"estimate", to_json(r.estimate)},
              {"exhausted", r.exhausted},
              {"area", r.area},
              {"q_abs", r.q_abs},
              {"band", Json{{"lo", r.band_lo}, {"hi", r.band_hi}}},
              {"verdict", to_string(r.verdict)},
              {"note", r.note}};
}

Json to_json(const RatioReport& r) {
  Json rows = Json::array();
  for (const RatioRow& x : r.rows) {
    rows.push_back(Json{{"b", x.b.to_string()},
                        {"ratio", to_json(x.ratio)},
                        {"area_next", x.area_next},
                        {"band", Json{{"lo", x.band_lo}, {"hi", x.band_hi}}},
                        {"simplified_band", Json{{"lo", x.simple_lo}, {"hi", x.simple_hi}}},
                        {"verdict", to_string(x.verdict)}});
  }
  Json scaling = Json::array();
  for (const ScalingRow& s : r.scaling) {
    scaling.push_back(Json{{"b", s.b.to_string()},
                           {"base", s.base.to_string()},
                           {"ratio", s.ratio},
                           {"ci_lo", s.lo},
                           {"ci_hi", s.hi},
                           {"predicted", s.predicted},
                           {"verdict", to_string(s.verdict)}});
  }
  Json lowbow = Json::array();
  for (const LowBowRow& l : r.lowbow) {
    lowbow.push_back(
        Json{{"M", l.M}, {"p_le", to_json(l.p_le)}, {"bound", l.bound}, {"verdict", to_string(l.verdict)}});
  }
  return Json{{"prefix", digits_json(r.prefix)},
              {"draws", r.draws},
              {"in_prefix", r.in_prefix},
              {"exhausted", r.exhausted},
              {"area_prefix", r.area_prefix},
              {"rows", rows},
              {"scaling", scaling},
              {"lowbow", lowbow},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const BBReport& r) {
  Json windows = Json::array();
  for (const BBWindowRow& w : r.windows) {
    windows.push_back(Json{{"lo", w.w.lo},
                           {"hi", w.w.hi},
                           {"modulus", to_json(w.modulus)},
                           {"sup", to_json(w.sup)},
                           {"sup_relaxed", to_json(w.sup_relaxed)},
                           {"tail_bound", w.tail_bound},
                           {"sandwich", w.sandwich}});
  }
  Json cum = Json::array();
  for (const BBCumulativeRow& c : r.cumulative)
    cum.push_back(Json{{"depth", c.depth}, {"modulus", to_json(c.modulus)}, {"sup", to_json(c.sup)}});
  return Json{{"u", r.u.to_string()},
              {"series_converges", r.u.series_converges()},
              {"cumulative_from", r.cumulative_from},
              {"exhausted", r.exhausted},
              {"windows", windows},
              {"cumulative", cum},
              {"checks", r.checks},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const LevyReport& r) {
  Json rows = Json::array();
  for (const LevyRow& x : r.rows)
    rows.push_back(Json{{"n", x.n}, {"stats", to_json(x.stats)}, {"rel_sd", x.rel_sd}, {"exhausted", x.exhausted}});
  return Json{{"checkpoints", rows},
              {"B", r.B},
              {"B_ci", Json{{"lo", r.B_lo}, {"hi", r.B_hi}}},
              {"checks", r.checks},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const KhinchinReport& r) {
  Json rows = Json::array();
  for (const KhinchinRow& x : r.rows) rows.push_back(Json{{"depth", x.depth}, {"counts", to_json(x.counts)}});
  Json series = Json::array();
  for (const auto& [n, s] : r.series) series.push_back(Json{{"N", n}, {"partial_sum", s}});
  return Json{{"psi", "x^-" + format_double(r.beta)},
              {"beta", r.beta},
              {"big_D", r.big_D},
              {"series_diverges", r.divergent},
              {"checkpoints", rows},
              {"growing", to_json(r.growing)},
              {"q_below_exp_Dn", to_json(r.q_bound)},
              {"fired", r.fired},
              {"verified", r.verified},
              {"violations", r.violations},
              {"exhausted", r.exhausted},
              {"series", series},
              {"checks", r.checks},
              {"verdict", to_string(r.verdict)}};
}

// ---------------------------------------------------------------------------

Table to_table(const CensusReport& r) {
  Table t{{"index", "first_depth", "kind", "area_lo", "area_hi", "witness", "canonical_id"}, {}};
  for (std::size_t i = 0; i < r.shapes.size(); ++i) {
    const CensusShape& s = r.shapes[i];
    t.rows.push_back({std::to_string(i), std::to_string(s.first_depth), to_string(s.kind), num(s.area.lo),
                      num(s.area.hi), digits_text(s.witness), s.region.canonical_id.value_or("")});
  }
  return t;
}

Table to_table(const MeasureReport& r) {
  return {{"digits", "hits", "trials", "estimate", "ci_lo", "ci_hi", "band_lo", "band_hi", "verdict"},
          {{digits_text(r.digits), num(r.estimate.hits), num(r.estimate.trials), num(r.estimate.estimate),
            num(r.estimate.lo), num(r.estimate.hi), num(r.band_lo), num(r.band_hi), to_string(r.verdict)}}};
}

Table to_table(const RatioReport& r) {
  Table t{{"b", "hits", "trials", "ratio", "ci_lo", "ci_hi", "band_lo", "band_hi", "verdict"}, {}};
  for (const RatioRow& x : r.rows)
    t.rows.push_back({x.b.to_string(), num(x.ratio.hits), num(x.ratio.trials), num(x.ratio.estimate),
                      num(x.ratio.lo), num(x.ratio.hi), num(x.band_lo), num(x.band_hi), to_string(x.verdict)});
  return t;
}

Table to_table(const BBReport& r) {
  Table t{{"row", "lo", "hi", "modulus", "modulus_ci_lo", "modulus_ci_hi", "sup", "sup_relaxed", "tail_bound"}, {}};
  for (const BBWindowRow& w : r.windows)
    t.rows.push_back({"window", std::to_string(w.w.lo), std::to_string(w.w.hi), num(w.modulus.estimate),
                      num(w.modulus.lo), num(w.modulus.hi), num(w.sup.estimate), num(w.sup_relaxed.estimate),
                      num(w.tail_bound)});
  for (const BBCumulativeRow& c : r.cumulative)
    t.rows.push_back({"cumulative", std::to_string(r.cumulative_from), std::to_string(c.depth),
                      num(c.modulus.estimate), num(c.modulus.lo), num(c.modulus.hi), num(c.sup.estimate), "", ""});
  return t;
}

Table to_table(const LevyReport& r) {
  Table t{{"n", "samples", "mean", "sd", "rel_sd", "ci_lo", "ci_hi", "exhausted"}, {}};
  for (const LevyRow& x : r.rows)
    t.rows.push_back({std::to_string(x.n), num(x.stats.n), num(x.stats.mean), num(x.stats.sd), num(x.rel_sd),
                      num(x.stats.ci_lo), num(x.stats.ci_hi), num(x.exhausted)});
  return t;
}

Table to_table(const KhinchinReport& r) {
  Table t{{"depth", "samples", "mean_count", "sd_count"}, {}};
  for (const KhinchinRow& x : r.rows)
    t.rows.push_back({std::to_string(x.depth), num(x.counts.n), num(x.counts.mean), num(x.counts.sd)});
  return t;
}

}  // namespace hurwitz
