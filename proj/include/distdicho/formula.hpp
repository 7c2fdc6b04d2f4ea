#pragma once

#include "distdicho/dataset.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

// Minimal model-formula support: `response ~ term (+ term)*`, identifiers
// [A-Za-z_][A-Za-z0-9_.]*. Categorical terms expand to reference-coded
// dummies at design-build time.

namespace distdicho::cli {

struct Formula {
    std::string response;
    std::vector<std::string> terms;
};

/// Parse a formula; syntax errors carry the byte offset.
Formula parse_formula(std::string_view text);

/// Design matrix built from a dataset, with listwise deletion of rows
/// missing the response or any term. Dummy columns are labeled
/// "<term>=<level>".
struct DesignMatrix {
    std::vector<std::vector<double>> columns; // first column is the intercept
    std::vector<std::string> labels;
    std::vector<double> response;
    long n_dropped = 0;
    std::map<std::string, long> group_level_counts; // for group_var, retained rows
    std::string reference_level;                    // of group_var
};

/// `group_var` must appear among the formula terms and is always treated as
/// categorical. `reference` overrides the default (lexicographically
/// smallest) reference level; pass "" for the default.
DesignMatrix build_design(const Dataset& data, const Formula& formula,
                          const std::string& group_var, const std::string& reference);

} // namespace distdicho::cli
