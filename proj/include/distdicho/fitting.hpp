#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Parameter estimation: pooled / ratio-constrained standard deviations,
// Welch degrees of freedom, common-shape maximum likelihood for the
// skew-normal and gamma models, and ordinary least squares with marginal
// means. All operations are pure given their inputs.

namespace distdicho::fitting {

/// Per-group sufficient statistics. n >= 2, sd > 0.
struct GroupSummary {
    long n;
    double mean;
    double sd;
};

/// Thrown when an iterative fit hits its iteration cap; carries the last
/// iterate.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double last)
        : std::runtime_error(msg), last_iterate_(last)
    {
    }

    double last_iterate() const { return last_iterate_; }

private:
    double last_iterate_;
};

/// Equal-variance pooled standard deviation,
/// sqrt(((n1-1) s1^2 + (n2-1) s2^2) / (n1 + n2 - 2)).
double pooled_sd(const GroupSummary& g1, const GroupSummary& g2);

struct SdPair {
    double exposed;
    double control;
};

/// Group standard deviations under a known variance ratio
/// R = var(exposed) / var(control):
///   sd_control^2 = ((n_t-1) s_t^2 / R + (n_c-1) s_c^2) / (n_t + n_c - 2)
///   sd_exposed^2 = R sd_control^2.
/// Reduces to (pooled, pooled) when R = 1.
SdPair ratio_pooled_sds(const GroupSummary& exposed, const GroupSummary& control, double ratio);

/// Welch-Satterthwaite degrees of freedom.
double welch_df(const GroupSummary& g1, const GroupSummary& g2);

/// Method-of-moments gamma shape, (mean/sd)^2.
double gamma_moment_shape(double mean, double sd);

/// Common skew-normal shape across two groups: each group keeps its own
/// mean, the sd is pooled, and the profile log-likelihood is maximized over
/// alpha in [-50, 50] by golden-section search (width 1e-6, 200 iteration
/// cap). Requires two groups and at least 10 observations in total.
double fit_sn_shape(const std::vector<double>& values, const std::vector<std::string>& groups);

/// Common gamma shape across two groups (each group its own mean), by
/// Newton iteration on the profile score in ln(alpha), initialized at the
/// count-weighted method-of-moments value. Data must be strictly positive;
/// zeros are rejected with a hint to apply a positive shift.
double fit_gamma_shape(const std::vector<double>& values, const std::vector<std::string>& groups);

/// Ordinary least squares fit. Rows with NaN anywhere are dropped
/// (listwise deletion) and counted in n_dropped. Dummy columns are labeled
/// "<term>=<level>".
struct FittedLinearModel {
    std::vector<double> coefficients;
    double residual_sd;
    std::vector<double> covariate_means; // column means over retained rows
    std::map<std::string, long> level_counts; // group levels, filled by the design builder
    std::vector<std::string> design_labels;
    long n_used = 0;
    long n_dropped = 0;
};

/// Solve the normal equations for `columns` (including an intercept column
/// if wanted) against `response`. Throws on rank deficiency, naming the
/// offending column (pivot threshold 1e-10 relative).
FittedLinearModel ols_fit(const std::vector<std::vector<double>>& columns,
                          const std::vector<std::string>& labels,
                          const std::vector<double>& response);

/// Marginal means per exposure level: prediction at covariate means with
/// the group indicator set per level. Requires level_counts to be filled
/// for group_var.
std::map<std::string, double> marginal_means(const FittedLinearModel& model,
                                             const std::string& group_var);

} // namespace distdicho::fitting
