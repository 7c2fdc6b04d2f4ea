#include "distdicho/distributions.hpp"

#include "distdicho/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace distdicho::distributions {

namespace {

constexpr double kTwoOverPi = 0.63661977236758134308;

void check_sd(double sd, const char* fn)
{
    if (!(sd > 0.0) || std::isnan(sd) || std::isinf(sd))
        throw std::domain_error(std::string(fn) + ": requires finite sd > 0");
}

void check_gamma(const GammaParams& p, const char* fn)
{
    if (!(p.shape > 0.0) || std::isnan(p.shape) || std::isinf(p.shape))
        throw std::domain_error(std::string(fn) + ": requires finite shape > 0");
    if (!(p.mean > 0.0) || std::isnan(p.mean) || std::isinf(p.mean))
        throw std::domain_error(std::string(fn) + ": requires finite mean > 0");
}

void check_prob(double prob, const char* fn)
{
    if (!(prob > 0.0 && prob < 1.0))
        throw std::domain_error(std::string(fn) + ": requires p in (0, 1)");
}

} // namespace

SkewNormalDirect sn_centred_to_direct(const SkewNormalCentred& p)
{
    check_sd(p.sd, "sn_centred_to_direct");
    if (std::isnan(p.shape) || std::isinf(p.shape))
        throw std::domain_error("sn_centred_to_direct: requires finite shape");

    // mu_z^2 = (2/pi) alpha^2 / (1 + alpha^2) < 2/pi, so no singularity.
    const double a2 = p.shape * p.shape;
    const double mu_z2 = kTwoOverPi * a2 / (1.0 + a2);
    const double mu_z = std::copysign(std::sqrt(mu_z2), p.shape);
    const double w = p.sd / std::sqrt(1.0 - mu_z2);
    return {p.mean - w * mu_z, w, p.shape};
}

SkewNormalCentred sn_direct_to_centred(const SkewNormalDirect& p)
{
    check_sd(p.scale, "sn_direct_to_centred");
    const double a2 = p.shape * p.shape;
    const double mu_z2 = kTwoOverPi * a2 / (1.0 + a2);
    const double mu_z = std::copysign(std::sqrt(mu_z2), p.shape);
    return {p.location + p.scale * mu_z, p.scale * std::sqrt(1.0 - mu_z2), p.shape};
}

double sn_cdf(const SkewNormalCentred& p, double x)
{
    const SkewNormalDirect d = sn_centred_to_direct(p);
    const double z = (x - d.location) / d.scale;
    const double v = specfun::normal_cdf(z) - 2.0 * specfun::owens_t(z, p.shape);
    // Guard roundoff at the extremes.
    if (v < 0.0)
        return 0.0;
    if (v > 1.0)
        return 1.0;
    return v;
}

double sn_pdf(const SkewNormalCentred& p, double x)
{
    const SkewNormalDirect d = sn_centred_to_direct(p);
    const double z = (x - d.location) / d.scale;
    return 2.0 / d.scale * specfun::normal_pdf(z) * specfun::normal_cdf(p.shape * z);
}

double sn_quantile(const SkewNormalCentred& p, double prob)
{
    check_prob(prob, "sn_quantile");
    const SkewNormalDirect d = sn_centred_to_direct(p);
    double lo = d.location - 20.0 * d.scale;
    double hi = d.location + 20.0 * d.scale;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (sn_cdf(p, mid) < prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double normal_cdf(const NormalParams& p, double x)
{
    check_sd(p.sd, "normal_cdf");
    return specfun::normal_cdf((x - p.mean) / p.sd);
}

double normal_pdf(const NormalParams& p, double x)
{
    check_sd(p.sd, "normal_pdf");
    return specfun::normal_pdf((x - p.mean) / p.sd) / p.sd;
}

double normal_quantile(const NormalParams& p, double prob)
{
    check_sd(p.sd, "normal_quantile");
    return p.mean + p.sd * specfun::normal_quantile(prob);
}

double gamma_cdf(const GammaParams& p, double x)
{
    check_gamma(p, "gamma_cdf");
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("gamma_cdf: requires x >= 0");
    return specfun::reg_gamma_lower(p.shape, p.shape * x / p.mean);
}

double gamma_pdf(const GammaParams& p, double x)
{
    check_gamma(p, "gamma_pdf");
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("gamma_pdf: requires x >= 0");
    if (x == 0.0)
        return p.shape < 1.0 ? std::numeric_limits<double>::infinity()
                             : (p.shape == 1.0 ? p.rate() : 0.0);
    const double r = p.rate();
    return std::exp(p.shape * std::log(r) + (p.shape - 1.0) * std::log(x) - r * x
                    - specfun::log_gamma(p.shape));
}

double gamma_quantile(const GammaParams& p, double prob)
{
    check_gamma(p, "gamma_quantile");
    check_prob(prob, "gamma_quantile");

    double hi = p.mean;
    while (gamma_cdf(p, hi) < prob)
        hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-10 * hi && hi - lo > 1e-300) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_cdf(p, mid) < prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double t_cdf(const StudentT& dist, double t)
{
    if (!(dist.df > 0.0) || std::isnan(dist.df))
        throw std::domain_error("t_cdf: requires df > 0");
    if (std::isnan(t))
        throw std::domain_error("t_cdf: NaN argument");
    if (t == 0.0)
        return 0.5;
    const double x = dist.df / (dist.df + t * t);
    const double tail = 0.5 * specfun::reg_beta(0.5 * dist.df, 0.5, x);
    return t < 0.0 ? tail : 1.0 - tail;
}

double t_quantile(const StudentT& dist, double prob)
{
    if (!(dist.df > 0.0) || std::isnan(dist.df))
        throw std::domain_error("t_quantile: requires df > 0");
    check_prob(prob, "t_quantile");
    if (prob == 0.5)
        return 0.0;

    double hi = 2.0;
    while (t_cdf(dist, hi) < 0.9999999999 && hi < 1e100)
        hi *= 2.0;
    double lo = -hi;
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (t_cdf(dist, mid) < prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace distdicho::distributions
