#pragma once

#include "json.hpp"

#include "causalid/admg.hpp"
#include "causalid/expr.hpp"
#include "causalid/identify.hpp"

namespace causalid {

// Expression AST: {"kind": "atom"|"product"|"marginal"|"quotient", ...}
// with every set written as a sorted array.
nlohmann::json to_json(const Expression& e);
// Throws ParseError on a malformed document.
Expression expression_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Admg& g);
nlohmann::json to_json(const HedgeWitness& w);
nlohmann::json to_json(const Trace& trace);

}  // namespace causalid
