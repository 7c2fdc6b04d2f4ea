#pragma once

#include "distdicho/distcore.hpp"
#include "distdicho/fitting.hpp"

#include <map>
#include <string>
#include <vector>

// Regression-adjusted comparisons: marginal means per exposure level plus a
// single model error SD (linear) or sqrt(sigma_e^2 + sigma_r^2) (two-level
// random intercept) feed pairwise normal comparisons of each level against
// the reference.

namespace distdicho::regadjust {

struct AdjustedModelSummary {
    std::map<std::string, double> marginal_means; // level -> E(Y | R = r)
    double residual_sd;                           // sigma_e > 0
    double random_intercept_sd = 0.0;             // sigma_r >= 0
    std::map<std::string, long> level_counts;
    std::string reference_level;
};

/// One ComparisonResult per non-reference level versus the reference,
/// ordered by level label. Both pseudo-groups carry the identical model
/// sigma = sqrt(sigma_e^2 + sigma_r^2); nothing is re-pooled.
std::vector<distcore::ComparisonResult> adjusted_comparisons(const AdjustedModelSummary& summary,
                                                             double cut_point,
                                                             distcore::Tail tail,
                                                             double level = 0.95);

/// Build the summary from a fitted linear model: marginal means at covariate
/// means, sigma_e from the residual SD, sigma_r = 0.
AdjustedModelSummary from_ols(const fitting::FittedLinearModel& model,
                              const std::string& group_var);

} // namespace distdicho::regadjust
