#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "momentflow/flow.hpp"
#include "momentflow/invariants.hpp"
#include "momentflow/moment.hpp"
#include "momentflow/orbit.hpp"

namespace momentflow {

using OrderedJson = nlohmann::ordered_json;

/// Decimal with up to 17 significant digits; round-trips binary64 exactly.
std::string format_double(double x);

/// Deterministic serialization: insertion-ordered keys, doubles via
/// format_double. Throws on non-finite numbers.
std::string dump_json(const OrderedJson& j, int indent = 2);

/// Flattens a report tree to (dotted-path, value) cells; arrays join with ';'.
std::vector<std::pair<std::string, std::string>> flatten_json(const OrderedJson& j);

/// CSV with one header row and one row per report, aligned on the first
/// report's columns.
std::string to_csv(const std::vector<OrderedJson>& rows);

OrderedJson to_json(const CriticalCertificate& c);
OrderedJson to_json(const AlgebraInvariants& inv);
OrderedJson to_json(const MomentValue& mv);
OrderedJson to_json(const FlowResult& r, bool include_history = false);
OrderedJson to_json(const DistinguishedVerdict& v);
OrderedJson to_json(const ComplexDistinguishedVerdict& v);
OrderedJson to_json(const NilsolitonData& d);
OrderedJson to_json(const KOrbitSignature& s);
OrderedJson to_json(const RealComplexReport& r);
OrderedJson to_json(const ClosedOrbitReport& r);
OrderedJson to_json(const RealFormsReport& r);
OrderedJson to_json(const FlowConfig& cfg);

}  // namespace momentflow
