#pragma once

// JSON encoding of engine values. Key order is fixed so that equal inputs
// serialize to equal bytes.

#include "skewform/manifold.hpp"
#include "skewform/relations.hpp"

#include <json.hpp>

namespace skewform {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchemaVersion = "skewform.report/1";

Json to_json(const Expr &e);
Json to_json(const Decision &d);
Json to_json(const Chart &c);
// {"chart", "degree", "terms": [{"indices": [var...], "coefficient"}]}
Json to_json(const DiffForm &a);
Json to_json(const ExprMatrix &m);
// Nonzero components only: [{"upper", "lower": [a, b], "value"}]
Json to_json(const Connection &c);
Json to_json(const Verdict &v);
Json to_json(const LocusReport &r);
Json to_json(const ChainStep &s);
Json to_json(const std::vector<ChainStep> &chain);
Json to_json(const Pseudostructure &s);

// Inverse of to_json(DiffForm). Throws Error on malformed input.
DiffForm form_from_json(const Json &j);
// Accepts the to_json(Connection) layout on the given chart.
Connection connection_from_json(const Json &j, const Chart &chart);

} // namespace skewform
