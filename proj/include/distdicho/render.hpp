#pragma once

#include "distdicho/distcore.hpp"
#include "distdicho/regadjust.hpp"

#include <json.hpp>

#include <string>
#include <vector>

// Text and JSON renderers for comparison results. The text layout follows
// the classic console report: banner, group table
// (Group/Obs/Mean/Std.Dev/Dist.prop.) and effect table
// (Stat/Estimate/Std.Err/CI.lower/CI.upper), 7 significant digits.

namespace distdicho::cli {

/// R-style significant-digit formatting (minimal fixed representation).
std::string format_signif(double x, int digits);

/// p-value formatting, 4 significant digits, scientific when small.
std::string format_pvalue(double p);

struct RenderOptions {
    bool dicho_footer = true; // the extra "calculated using" footnote line
};

std::string render_ttest_text(const distcore::TTestResult& t);
std::string render_comparison_text(const distcore::ComparisonResult& result,
                                   const RenderOptions& options = {});

/// Comparison list as printed by regdicho: one "[[k]]" block per result.
std::string render_comparison_list_text(const std::vector<distcore::ComparisonResult>& results);

nlohmann::json comparison_to_json(const distcore::ComparisonResult& result);
distcore::ComparisonResult comparison_from_json(const nlohmann::json& j);

nlohmann::json ttest_to_json(const distcore::TTestResult& t);

regadjust::AdjustedModelSummary adjusted_summary_from_json(const nlohmann::json& j);

} // namespace distdicho::cli
