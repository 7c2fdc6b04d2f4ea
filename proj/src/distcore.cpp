#include "distdicho/distcore.hpp"

#include "distdicho/distributions.hpp"
#include "distdicho/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace distdicho::distcore {

namespace {

void check_summary(const fitting::GroupSummary& g, const char* fn)
{
    if (g.n < 2)
        throw std::domain_error(std::string(fn) + ": requires n >= 2 per group");
    if (!(g.sd > 0.0) || std::isnan(g.sd) || std::isinf(g.sd))
        throw std::domain_error(std::string(fn) + ": requires finite sd > 0");
    if (std::isnan(g.mean) || std::isinf(g.mean))
        throw std::domain_error(std::string(fn) + ": requires finite mean");
}

void check_level(double level, const char* fn)
{
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error(std::string(fn) + ": requires level in (0, 1)");
}

void check_cut_point(double cp, const char* fn)
{
    if (std::isnan(cp) || std::isinf(cp))
        throw std::domain_error(std::string(fn) + ": requires a finite cut-point");
}

// Proportions outside [1e-15, 1 - 1e-15] are refused rather than clamped.
void check_support(double p)
{
    if (!(p >= 1e-15 && p <= 1.0 - 1e-15))
        throw std::domain_error("cut-point outside distribution support precision");
}

// Assembles the three effect rows from tail-adjusted proportions and
// per-group variances of the proportion estimates.
ComparisonResult assemble(double cut_point, Tail tail, VarianceAssumption assumption,
                          std::optional<double> shape, const GroupLabels& labels,
                          const fitting::GroupSummary& exposed,
                          const fitting::GroupSummary& control, double p_exposed_lower,
                          double p_control_lower, double var_exposed, double var_control,
                          double level)
{
    check_support(p_exposed_lower);
    check_support(p_control_lower);

    double p_t = p_exposed_lower;
    double p_c = p_control_lower;
    if (tail == Tail::upper) {
        p_t = 1.0 - p_t;
        p_c = 1.0 - p_c;
    }

    const double q = specfun::normal_quantile(1.0 - (1.0 - level) / 2.0);

    EffectRow diff;
    diff.name = "diff";
    diff.estimate = p_t - p_c;
    diff.se = std::sqrt(var_exposed + var_control);
    diff.ci_lower = diff.estimate - q * diff.se;
    diff.ci_upper = diff.estimate + q * diff.se;

    EffectRow rr;
    rr.name = "rr";
    rr.estimate = p_t / p_c;
    rr.se_log = std::sqrt(var_exposed / (p_t * p_t) + var_control / (p_c * p_c));
    rr.se = rr.estimate * *rr.se_log;
    rr.ci_lower = std::exp(std::log(rr.estimate) - q * *rr.se_log);
    rr.ci_upper = std::exp(std::log(rr.estimate) + q * *rr.se_log);

    EffectRow odds;
    odds.name = "or";
    odds.estimate = (p_t / (1.0 - p_t)) / (p_c / (1.0 - p_c));
    const double gt = p_t * (1.0 - p_t);
    const double gc = p_c * (1.0 - p_c);
    odds.se_log = std::sqrt(var_exposed / (gt * gt) + var_control / (gc * gc));
    odds.se = odds.estimate * *odds.se_log;
    odds.ci_lower = std::exp(std::log(odds.estimate) - q * *odds.se_log);
    odds.ci_upper = std::exp(std::log(odds.estimate) + q * *odds.se_log);

    ComparisonResult out;
    out.cut_point = cut_point;
    out.tail = tail;
    out.assumption = assumption;
    out.shape = shape;
    out.groups = {GroupResult{labels.exposed, exposed.n, exposed.mean, exposed.sd, p_t},
                  GroupResult{labels.control, control.n, control.mean, control.sd, p_c}};
    out.diff = diff;
    out.risk_ratio = rr;
    out.odds_ratio = odds;
    out.level = level;
    return out;
}

ComparisonResult normal_impl(const fitting::GroupSummary& exposed,
                             const fitting::GroupSummary& control, double sigma_t,
                             double sigma_c, bool unknown_correction, double cut_point,
                             Tail tail, VarianceAssumption assumption, double level,
                             const GroupLabels& labels)
{
    const double z_t = (cut_point - exposed.mean) / sigma_t;
    const double z_c = (cut_point - control.mean) / sigma_c;
    const double p_t = specfun::normal_cdf(z_t);
    const double p_c = specfun::normal_cdf(z_c);
    const double f_t = specfun::normal_pdf(z_t) / sigma_t;
    const double f_c = specfun::normal_pdf(z_c) / sigma_c;

    double var_t = sigma_t * sigma_t / static_cast<double>(exposed.n) * f_t * f_t;
    double var_c = sigma_c * sigma_c / static_cast<double>(control.n) * f_c * f_c;
    if (unknown_correction) {
        // Two-parameter delta correction for the estimated variance.
        var_t *= 1.0 + 0.5 * z_t * z_t;
        var_c *= 1.0 + 0.5 * z_c * z_c;
    }
    return assemble(cut_point, tail, assumption, std::nullopt, labels, exposed, control, p_t,
                    p_c, var_t, var_c, level);
}

} // namespace

ComparisonResult dist_normal(const fitting::GroupSummary& exposed,
                             const fitting::GroupSummary& control, double cut_point, Tail tail,
                             VarianceAssumption assumption, double level,
                             const GroupLabels& labels)
{
    check_summary(exposed, "dist_normal");
    check_summary(control, "dist_normal");
    check_cut_point(cut_point, "dist_normal");
    check_level(level, "dist_normal");

    switch (assumption.kind) {
    case VarianceAssumption::Kind::equal: {
        const double sp = fitting::pooled_sd(exposed, control);
        return normal_impl(exposed, control, sp, sp, false, cut_point, tail, assumption, level,
                           labels);
    }
    case VarianceAssumption::Kind::known_ratio: {
        const fitting::SdPair sds = fitting::ratio_pooled_sds(exposed, control, assumption.ratio);
        return normal_impl(exposed, control, sds.exposed, sds.control, false, cut_point, tail,
                           assumption, level, labels);
    }
    case VarianceAssumption::Kind::unknown_unequal:
        return normal_impl(exposed, control, exposed.sd, control.sd, true, cut_point, tail,
                           assumption, level, labels);
    }
    throw std::logic_error("dist_normal: unreachable");
}

ComparisonResult dist_normal_with_sds(const fitting::GroupSummary& exposed,
                                      const fitting::GroupSummary& control, double sd_exposed,
                                      double sd_control, double cut_point, Tail tail,
                                      double level, const GroupLabels& labels)
{
    check_summary(exposed, "dist_normal_with_sds");
    check_summary(control, "dist_normal_with_sds");
    check_cut_point(cut_point, "dist_normal_with_sds");
    check_level(level, "dist_normal_with_sds");
    if (!(sd_exposed > 0.0) || !(sd_control > 0.0))
        throw std::domain_error("dist_normal_with_sds: requires sds > 0");
    return normal_impl(exposed, control, sd_exposed, sd_control, false, cut_point, tail,
                       VarianceAssumption::equal(), level, labels);
}

ComparisonResult dist_skewnormal(const fitting::GroupSummary& exposed,
                                 const fitting::GroupSummary& control, double shape,
                                 double cut_point, Tail tail, double level,
                                 const GroupLabels& labels)
{
    check_summary(exposed, "dist_skewnormal");
    check_summary(control, "dist_skewnormal");
    check_cut_point(cut_point, "dist_skewnormal");
    check_level(level, "dist_skewnormal");
    if (std::isnan(shape) || std::isinf(shape))
        throw std::domain_error("dist_skewnormal: requires finite shape");

    using distributions::SkewNormalCentred;
    const double sp = fitting::pooled_sd(exposed, control);
    const SkewNormalCentred dist_t{exposed.mean, sp, shape};
    const SkewNormalCentred dist_c{control.mean, sp, shape};
    const double p_t = distributions::sn_cdf(dist_t, cut_point);
    const double p_c = distributions::sn_cdf(dist_c, cut_point);
    const double f_t = distributions::sn_pdf(dist_t, cut_point);
    const double f_c = distributions::sn_pdf(dist_c, cut_point);

    // Both variance terms divide by the exposed group's n; with equal group
    // sizes this equals the per-group delta method.
    const double n_ref = static_cast<double>(exposed.n);
    const double var_t = sp * sp / n_ref * f_t * f_t;
    const double var_c = sp * sp / n_ref * f_c * f_c;
    return assemble(cut_point, tail, VarianceAssumption::equal(), shape, labels, exposed,
                    control, p_t, p_c, var_t, var_c, level);
}

ComparisonResult dist_gamma(const fitting::GroupSummary& exposed,
                            const fitting::GroupSummary& control, double shape,
                            double cut_point, Tail tail, double level,
                            const GroupLabels& labels)
{
    check_summary(exposed, "dist_gamma");
    check_summary(control, "dist_gamma");
    check_level(level, "dist_gamma");
    if (!(shape > 0.0) || std::isnan(shape) || std::isinf(shape))
        throw std::domain_error("dist_gamma: requires shape > 0");
    if (!(cut_point > 0.0) || std::isnan(cut_point) || std::isinf(cut_point))
        throw std::domain_error("dist_gamma: requires cut-point > 0");
    if (!(exposed.mean > 0.0) || !(control.mean > 0.0))
        throw std::domain_error("dist_gamma: requires positive group means");

    const double p_t = distributions::gamma_cdf({shape, exposed.mean}, cut_point);
    const double p_c = distributions::gamma_cdf({shape, control.mean}, cut_point);

    // var(p) = q^2 / (n alpha) with q = (alpha cp / mean)^alpha
    // exp(-alpha cp / mean) / Gamma(alpha).
    const auto q_factor = [&](double mean) {
        const double u = shape * cut_point / mean;
        return std::exp(shape * std::log(u) - u - specfun::log_gamma(shape));
    };
    const double q_t = q_factor(exposed.mean);
    const double q_c = q_factor(control.mean);
    const double var_t = q_t * q_t / (static_cast<double>(exposed.n) * shape);
    const double var_c = q_c * q_c / (static_cast<double>(control.n) * shape);
    return assemble(cut_point, tail, VarianceAssumption::equal(), shape, labels, exposed,
                    control, p_t, p_c, var_t, var_c, level);
}

TTestResult t_test(const fitting::GroupSummary& exposed, const fitting::GroupSummary& control,
                   TTestVariant variant, double level)
{
    check_summary(exposed, "t_test");
    check_summary(control, "t_test");
    check_level(level, "t_test");

    const double n_t = static_cast<double>(exposed.n);
    const double n_c = static_cast<double>(control.n);
    const double diff = exposed.mean - control.mean;

    double se;
    double df;
    if (variant == TTestVariant::pooled) {
        const double sp = fitting::pooled_sd(exposed, control);
        se = sp * std::sqrt(1.0 / n_t + 1.0 / n_c);
        df = n_t + n_c - 2.0;
    } else {
        se = std::sqrt(exposed.sd * exposed.sd / n_t + control.sd * control.sd / n_c);
        df = fitting::welch_df(exposed, control);
    }

    const distributions::StudentT dist{df};
    const double t = diff / se;
    const double p = 2.0 * distributions::t_cdf(dist, -std::fabs(t));
    const double qt = distributions::t_quantile(dist, 1.0 - (1.0 - level) / 2.0);

    TTestResult out;
    out.t = t;
    out.df = df;
    out.p_two_sided = p;
    out.ci_lower = diff - qt * se;
    out.ci_upper = diff + qt * se;
    out.mean_exposed = exposed.mean;
    out.mean_control = control.mean;
    out.variant = variant;
    out.level = level;
    return out;
}

} // namespace distdicho::distcore
