// json_io.hpp - scenario files and report serialization.
//
// Output is deterministic: object keys sorted, floating-point numbers printed
// with %.17g, non-finite numbers as null. See docs/formats.md for schemas.

#pragma once

#include "cosc/eigenfun.hpp"
#include "cosc/fock.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace cosc::io {

using Json = nlohmann::json;

/// Malformed or incomplete input document.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string dump(const Json& j);

/// {"kind": "expr", "expr": "..."}, {"kind": "samples", "samples": [[t, v], ...]},
/// a bare expression string or a bare number.
ScalarSchedule schedule_from_json(const Json& j, const TimeDomain& domain);
/// Closed-form schedules as expressions, others sampled on `grid`.
Json schedule_to_json(const ScalarSchedule& s, std::span<const double> grid);

Scenario scenario_from_json(const Json& j);
Scenario load_scenario(const std::string& path);
Json scenario_to_json(const Scenario& s, std::span<const double> grid);

Json to_json(const Constants& c);
Json to_json(const ValidationReport& r);
Json to_json(const DecoupledSpectrumData& d);
Json to_json(const SpectrumReport& r);
Json to_json(const FockBasisSpec& b);

}  // namespace cosc::io
