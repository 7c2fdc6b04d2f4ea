#pragma once

#include "distdicho/fitting.hpp"

#include <array>
#include <optional>
#include <string>

// Distributional estimators: per-group proportions beyond a cut-point and
// the difference in proportions, risk ratio and odds ratio between two
// groups, each with a delta-method standard error and confidence interval.
// Pure computation over immutable inputs.

namespace distdicho::distcore {

enum class Tail { lower, upper };

struct VarianceAssumption {
    enum class Kind { equal, known_ratio, unknown_unequal };

    Kind kind = Kind::equal;
    double ratio = 1.0; // var(exposed) / var(control), known_ratio only

    static VarianceAssumption equal() { return {Kind::equal, 1.0}; }
    static VarianceAssumption known_ratio(double r) { return {Kind::known_ratio, r}; }
    static VarianceAssumption unknown_unequal() { return {Kind::unknown_unequal, 1.0}; }
};

/// One effect line: "diff", "rr" or "or". For ratio effects the CI is
/// symmetric on the log scale and the reported se is estimate * se_log.
struct EffectRow {
    std::string name;
    double estimate;
    double se;
    std::optional<double> se_log; // rr/or only
    double ci_lower;
    double ci_upper;
};

struct GroupResult {
    std::string label;
    long n;
    double mean;
    double sd;
    double dist_prop;
};

struct ComparisonResult {
    double cut_point;
    Tail tail;
    VarianceAssumption assumption;
    std::optional<double> shape; // alpha for skew-normal / gamma
    std::array<GroupResult, 2> groups; // [exposed, control]
    EffectRow diff;
    EffectRow risk_ratio;
    EffectRow odds_ratio;
    double level = 0.95;
};

struct GroupLabels {
    std::string exposed = "exposed";
    std::string control = "control";
};

/// Normal-model comparison under one of the three variance regimes.
ComparisonResult dist_normal(const fitting::GroupSummary& exposed,
                             const fitting::GroupSummary& control, double cut_point, Tail tail,
                             VarianceAssumption assumption, double level = 0.95,
                             const GroupLabels& labels = {});

/// Normal-model comparison with both group standard deviations imposed
/// directly (no pooling); used for regression-adjusted comparisons.
ComparisonResult dist_normal_with_sds(const fitting::GroupSummary& exposed,
                                      const fitting::GroupSummary& control, double sd_exposed,
                                      double sd_control, double cut_point, Tail tail,
                                      double level = 0.95, const GroupLabels& labels = {});

/// Skew-normal comparison with a known common shape; sd pooled across the
/// groups (equal-variance hypothesis).
ComparisonResult dist_skewnormal(const fitting::GroupSummary& exposed,
                                 const fitting::GroupSummary& control, double shape,
                                 double cut_point, Tail tail, double level = 0.95,
                                 const GroupLabels& labels = {});

/// Gamma comparison with a known common shape; group means parameterize the
/// per-group distributions.
ComparisonResult dist_gamma(const fitting::GroupSummary& exposed,
                            const fitting::GroupSummary& control, double shape,
                            double cut_point, Tail tail, double level = 0.95,
                            const GroupLabels& labels = {});

enum class TTestVariant { pooled, welch };

struct TTestResult {
    double t;
    double df;
    double p_two_sided;
    double ci_lower;
    double ci_upper;
    double mean_exposed;
    double mean_control;
    TTestVariant variant;
    double level;
};

/// Two-sample t-test from summary statistics.
TTestResult t_test(const fitting::GroupSummary& exposed, const fitting::GroupSummary& control,
                   TTestVariant variant, double level = 0.95);

} // namespace distdicho::distcore
