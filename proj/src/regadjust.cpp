#include "distdicho/regadjust.hpp"

#include <cmath>
#include <stdexcept>

namespace distdicho::regadjust {

std::vector<distcore::ComparisonResult> adjusted_comparisons(const AdjustedModelSummary& summary,
                                                             double cut_point,
                                                             distcore::Tail tail, double level)
{
    if (summary.level_counts.size() < 2)
        throw std::domain_error("adjusted_comparisons: requires at least 2 exposure levels");
    if (!(summary.residual_sd > 0.0))
        throw std::domain_error("adjusted_comparisons: requires residual_sd > 0");
    if (!(summary.random_intercept_sd >= 0.0))
        throw std::domain_error("adjusted_comparisons: requires random_intercept_sd >= 0");
    const auto ref_count = summary.level_counts.find(summary.reference_level);
    if (ref_count == summary.level_counts.end())
        throw std::domain_error("adjusted_comparisons: reference level '"
                                + summary.reference_level + "' not among the levels");
    const auto ref_mean = summary.marginal_means.find(summary.reference_level);
    if (ref_mean == summary.marginal_means.end())
        throw std::domain_error("adjusted_comparisons: no marginal mean for the reference level");

    const double sigma = std::sqrt(summary.residual_sd * summary.residual_sd
                                   + summary.random_intercept_sd * summary.random_intercept_sd);

    const fitting::GroupSummary control{ref_count->second, ref_mean->second, sigma};

    std::vector<distcore::ComparisonResult> out;
    for (const auto& [level_label, count] : summary.level_counts) {
        if (level_label == summary.reference_level)
            continue;
        if (count < 2)
            throw std::domain_error("adjusted_comparisons: level '" + level_label
                                    + "' has fewer than 2 observations");
        const auto mean_it = summary.marginal_means.find(level_label);
        if (mean_it == summary.marginal_means.end())
            throw std::domain_error("adjusted_comparisons: no marginal mean for level '"
                                    + level_label + "'");
        const fitting::GroupSummary exposed{count, mean_it->second, sigma};
        out.push_back(distcore::dist_normal_with_sds(
            exposed, control, sigma, sigma, cut_point, tail, level,
            {level_label, summary.reference_level}));
    }
    return out;
}

AdjustedModelSummary from_ols(const fitting::FittedLinearModel& model,
                              const std::string& group_var)
{
    AdjustedModelSummary out;
    out.marginal_means = fitting::marginal_means(model, group_var);
    out.residual_sd = model.residual_sd;
    out.random_intercept_sd = 0.0;
    out.level_counts = model.level_counts;

    // The reference is the level without a dummy column.
    const std::string prefix = group_var + "=";
    for (const auto& [level_label, mean] : out.marginal_means) {
        (void)mean;
        bool has_dummy = false;
        for (const auto& label : model.design_labels)
            if (label == prefix + level_label)
                has_dummy = true;
        if (!has_dummy) {
            out.reference_level = level_label;
            break;
        }
    }
    if (out.reference_level.empty())
        throw std::domain_error("from_ols: could not identify the reference level for '"
                                + group_var + "'");
    return out;
}

} // namespace distdicho::regadjust
