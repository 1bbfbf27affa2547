#pragma once

#include "skewform/expr.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace skewform {

struct ParseOptions {
    // When set, identifiers outside this set are rejected.
    std::optional<std::set<std::string>> scalars;
};

// Parses a scalar expression into its canonical form. See docs/grammar.md.
Expr parse(std::string_view text, const ParseOptions &opts = {});

} // namespace skewform
