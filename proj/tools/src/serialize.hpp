#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "polycap/capacity_engine.hpp"
#include "polycap/fundamental_solutions.hpp"
#include "polycap/report.hpp"
#include "polycap/symbol_calculus.hpp"
#include "polycap/wiener_analyzer.hpp"

namespace polycap::cli {

using Json = nlohmann::json;

/// Deterministic rendering: sorted keys, two-space indent, floats with 17
/// significant digits, non-finite floats as null. Ends with a newline.
std::string dump(const Json& j);

/// %.17g
std::string format_double(double x);

Json to_json(const CoeffTable& t);
Json to_json(const FundSol& h);
Json to_json(const CapacityResult& r);
Json to_json(const std::vector<SweepPoint>& sweep);
Json to_json(const WienerSeries& s);
Json to_json(const Verdict& v);
Json to_json(const Report& r);

/// Inverses for the exact artifacts. Throw ValidationError on malformed input.
CoeffTable coeff_table_from_json(const Json& j);
FundSol fundsol_from_json(const Json& j);

std::string coeffs_csv(const CoeffTable& t);
std::string fundsol_csv(const FundSol& h);
std::string capacity_csv(const CapacityResult& r);
std::string sweep_csv(const std::vector<SweepPoint>& sweep);
std::string wiener_csv(const WienerSeries& s);
std::string report_csv(const Report& r);
/// One "PASS name: detail" / "FAIL ..." line per check and a summary line.
std::string report_text(const Report& r);

/// {"shells": [[a, b], ...]}; a bare number is a sphere.
RadialCompactum obstacle_from_json(const Json& j);

/// {"kind": "full"} | {"kind": "sphere", "cap_scale": rule} | {"kind": "sphere", "radius": rule}
/// | {"kind": "shell", "thickness": rule} | {"kind": "empty-after", "J": int}.
/// Rules are expression strings in j or numbers.
DomainModel model_from_json(const Json& j);

}  // namespace polycap::cli
