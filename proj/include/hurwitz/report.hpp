#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "hurwitz/census.hpp"
#include "hurwitz/experiments.hpp"
#include "hurwitz/hcf.hpp"

namespace hurwitz {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "hurwitz-lab/report-v1";

/// Integers as decimal strings: {"re": "3", "im": "-4"}.
Json to_json(const GaussInt& g);
/// {"re", "im", "den"}.
Json to_json(const GaussRational& q);
Json to_json(const DigitString& d);
Json to_json(const Interval& v);
Json to_json(const ExactConstant& c);
Json to_json(const Proportion& p);
Json to_json(const Summary& s);
Json to_json(const SampleSpec& s);
Json to_json(const Constraint& c);
Json to_json(const Region& r);
Json to_json(const DerivedConstants& k);
Json to_json(const CensusReport& r);
Json to_json(const MeasureReport& r);
Json to_json(const RatioReport& r);
Json to_json(const BBReport& r);
Json to_json(const LevyReport& r);
Json to_json(const KhinchinReport& r);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
Table to_table(const CensusReport& r);
Table to_table(const MeasureReport& r);
Table to_table(const RatioReport& r);
Table to_table(const BBReport& r);
Table to_table(const LevyReport& r);
Table to_table(const KhinchinReport& r);

/// printf("%.17g"); non-finite values become "null" in JSON.
std::string format_double(double v);
/// Deterministic JSON text: keys in insertion order, two-space indent,
/// floats with 17 significant digits.
std::string dump_canonical(const Json& j);
std::string to_csv(const Table& t);

/// {"schema", "command", "config", "result", "verdict", "metadata"}.
Json envelope(const std::string& command, Json config, Json result, const std::string& verdict, double wall_seconds,
              int threads);

}  // namespace hurwitz
