#pragma once

#include <string>
#include <string_view>

#include "causalid/oracle.hpp"

namespace causalid {

/// Reads a model document (JSON, schema in docs/model-format.md) and
/// validates it. Throws ParseError for malformed documents and ModelError
/// for invalid models.
DiscreteScm parse_model(std::string_view text);
DiscreteScm load_model(const std::string& path);

std::string dump_model(const DiscreteScm& m);

}  // namespace causalid
