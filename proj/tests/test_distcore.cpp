#include "distdicho/distcore.hpp"

#include "distdicho/distributions.hpp"
#include "distdicho/mc_validate.hpp"
#include "distdicho/specfun.hpp"
#include "oracle_utils.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace distdicho;
using distcore::ComparisonResult;
using distcore::Tail;
using distcore::VarianceAssumption;
using fitting::GroupSummary;

namespace {

const GroupSummary kSmokers{483, 3266.965, 437.7330};
const GroupSummary kNonSmokers{975, 3452.728, 436.4585};
const GroupSummary kEmployed{851, 0.04385758, 0.005646543};
const GroupSummary kUnemployed{709, 0.04338577, 0.006462314};

bool near(double got, double want, double rel)
{
    return std::fabs(got - want) <= rel * std::fabs(want);
}

} // namespace

TEST_CASE("equal-variance normal comparison reproduces the birthweight table")
{
    const ComparisonResult r = distcore::dist_normal(kSmokers, kNonSmokers, 2500.0, Tail::lower,
                                                     VarianceAssumption::equal());
    CHECK(near(r.groups[0].dist_prop, 0.03958289, 1e-5));
    CHECK(near(r.groups[1].dist_prop, 0.01460092, 1e-5));
    CHECK(near(r.diff.estimate, 0.02498197, 1e-5));
    CHECK(near(r.diff.se, 0.004064361, 1e-4));
    CHECK(near(r.diff.ci_lower, 0.01701597, 1e-4));
    CHECK(near(r.diff.ci_upper, 0.03294797, 1e-4));
    CHECK(near(r.risk_ratio.estimate, 2.71098543, 1e-5));
    CHECK(near(r.risk_ratio.ci_lower, 2.11190092, 1e-4));
    CHECK(near(r.risk_ratio.ci_upper, 3.48001270, 1e-4));
    CHECK(near(r.odds_ratio.estimate, 2.78150245, 1e-5));
    CHECK(near(r.odds_ratio.ci_lower, 2.15034801, 1e-4));
    CHECK(near(r.odds_ratio.ci_upper, 3.59790874, 1e-4));
    // Displayed ratio SE convention: estimate * se_log, within 2% of the table.
    CHECK(near(r.risk_ratio.se, 0.349646388, 0.02));
    CHECK(near(r.odds_ratio.se, 0.369993261, 0.02));
}

TEST_CASE("known-ratio comparison reproduces the R = 1.3 table")
{
    const ComparisonResult r = distcore::dist_normal(kEmployed, kUnemployed, 0.033, Tail::lower,
                                                     VarianceAssumption::known_ratio(1.3));
    CHECK(near(r.groups[0].dist_prop, 0.04705998, 1e-4));
    CHECK(near(r.groups[1].dist_prop, 0.03394227, 1e-4));
    CHECK(near(r.diff.estimate, 0.01311771, 1e-4));
    CHECK(near(r.diff.se, 0.004399089, 1e-4));
    CHECK(near(r.risk_ratio.estimate, 1.38647115, 1e-4));
    CHECK(near(r.odds_ratio.estimate, 1.40555663, 1e-4));
    CHECK(near(r.risk_ratio.ci_lower, 1.117850858, 1e-4));
    CHECK(near(r.risk_ratio.ci_upper, 1.71964107, 1e-4));
}

TEST_CASE("unknown-ratio correction reproduces proportions and lands near the printed SE")
{
    const ComparisonResult r = distcore::dist_normal(kEmployed, kUnemployed, 0.033, Tail::lower,
                                                     VarianceAssumption::unknown_unequal());
    CHECK(near(r.groups[0].dist_prop, 0.02724804, 1e-5));
    CHECK(near(r.groups[1].dist_prop, 0.05401313, 1e-5));
    CHECK(near(r.diff.estimate, -0.02676509, 1e-5));
    CHECK(near(r.diff.se, 0.006878875, 0.05));
    CHECK(near(r.risk_ratio.estimate, 0.50447062, 1e-4));
    CHECK(near(r.odds_ratio.estimate, 0.49059020, 1e-4));
    // The correction inflates every SE above the equal-variance value.
    const ComparisonResult eq = distcore::dist_normal(
        kEmployed, kUnemployed, 0.033, Tail::lower, VarianceAssumption::equal());
    CHECK(r.diff.se > eq.diff.se);
}

TEST_CASE("identical groups give null effects")
{
    const GroupSummary g{200, 10.0, 2.0};
    const ComparisonResult r =
        distcore::dist_normal(g, g, 8.0, Tail::lower, VarianceAssumption::equal());
    CHECK(r.diff.estimate == 0.0);
    CHECK(r.risk_ratio.estimate == 1.0);
    CHECK(r.odds_ratio.estimate == 1.0);
    CHECK(r.diff.ci_lower == -r.diff.ci_upper);
    CHECK(near(r.risk_ratio.ci_lower * r.risk_ratio.ci_upper, 1.0, 1e-12));
}

TEST_CASE("skew-normal with zero shape equals the equal-variance normal path")
{
    const ComparisonResult sn =
        distcore::dist_skewnormal(kSmokers, kNonSmokers, 0.0, 2500.0, Tail::lower);
    const ComparisonResult no = distcore::dist_normal(kSmokers, kNonSmokers, 2500.0, Tail::lower,
                                                      VarianceAssumption::equal());
    CHECK(std::fabs(sn.groups[0].dist_prop - no.groups[0].dist_prop) < 1e-10);
    CHECK(std::fabs(sn.groups[1].dist_prop - no.groups[1].dist_prop) < 1e-10);
    CHECK(std::fabs(sn.diff.estimate - no.diff.estimate) < 1e-10);
    // Variance terms coincide only when the group sizes match; compare a
    // balanced design for the SEs.
    const GroupSummary b1{500, 3266.965, 437.7330};
    const GroupSummary b2{500, 3452.728, 436.4585};
    const ComparisonResult sn_b = distcore::dist_skewnormal(b1, b2, 0.0, 2500.0, Tail::lower);
    const ComparisonResult no_b =
        distcore::dist_normal(b1, b2, 2500.0, Tail::lower, VarianceAssumption::equal());
    CHECK(std::fabs(sn_b.diff.se - no_b.diff.se) < 1e-10);
    CHECK(std::fabs(*sn_b.risk_ratio.se_log - *no_b.risk_ratio.se_log) < 1e-10);
    CHECK(std::fabs(*sn_b.odds_ratio.se_log - *no_b.odds_ratio.se_log) < 1e-10);
}

TEST_CASE("skew-normal comparison reproduces the alpha = 0.8668926 table")
{
    const ComparisonResult r =
        distcore::dist_skewnormal(kSmokers, kNonSmokers, 0.8668926, 2500.0, Tail::lower);
    CHECK(near(r.groups[0].dist_prop, 0.03656510, 1e-5));
    CHECK(near(r.groups[1].dist_prop, 0.01249528, 1e-5));
    CHECK(near(r.diff.estimate, 0.02406982, 1e-5));
    CHECK(near(r.diff.se, 0.004142819, 1e-4));
    CHECK(near(r.risk_ratio.estimate, 2.92631339, 1e-5));
    CHECK(near(r.risk_ratio.ci_lower, 2.12513449, 0.02));
    CHECK(near(r.risk_ratio.ci_upper, 4.0295380, 0.02));
    CHECK(near(r.odds_ratio.estimate, 2.99942247, 1e-5));
}

TEST_CASE("skew-normal upper-tail comparison reproduces the alpha = 4.119313 table")
{
    const GroupSummary g1{890, 23.84148, 4.012678};
    const GroupSummary g0{891, 22.96176, 3.388547};
    const ComparisonResult r = distcore::dist_skewnormal(g1, g0, 4.119313, 30.0, Tail::upper);
    CHECK(near(r.groups[0].dist_prop, 0.06835550, 1e-5));
    CHECK(near(r.groups[1].dist_prop, 0.04858033, 1e-5));
    CHECK(near(r.diff.estimate, 0.01977517, 1e-5));
    CHECK(near(r.diff.se, 0.004015664, 1e-4));
    CHECK(near(r.risk_ratio.estimate, 1.40706129, 1e-4));
    CHECK(near(r.odds_ratio.estimate, 1.43692770, 1e-4));
}

TEST_CASE("gamma comparison reproduces the alpha = 0.2371702 table")
{
    const GroupSummary g1{628, 0.4331210, 0.9108517};
    const GroupSummary g0{1277, 0.4628034, 0.9282585};
    const ComparisonResult r = distcore::dist_gamma(g1, g0, 0.2371702, 3.0, Tail::upper);
    CHECK(near(r.groups[0].dist_prop, 0.02579994, 1e-4));
    CHECK(near(r.groups[1].dist_prop, 0.02973904, 1e-4));
    CHECK(near(r.diff.estimate, -0.003939105, 1e-4));
    CHECK(near(r.diff.se, 0.005862453, 1e-4));
    CHECK(near(r.diff.ci_lower, -0.0154293, 1e-4));
    CHECK(near(r.diff.ci_upper, 0.007551093, 1e-4));
    CHECK(near(r.risk_ratio.estimate, 0.867544322, 1e-4));
    CHECK(near(r.odds_ratio.estimate, 0.864036471, 1e-4));
}

TEST_CASE("gamma degenerate cut-point limit")
{
    // cp -> 0+ puts the whole mass above the cut-point and kills the variance.
    const GroupSummary g1{100, 1.0, 1.0};
    const GroupSummary g0{100, 1.0, 1.0};
    const ComparisonResult r = distcore::dist_gamma(g1, g0, 1.0, 1e-10, Tail::upper);
    CHECK(r.groups[0].dist_prop > 1.0 - 2e-10);
    CHECK(r.diff.se < 1e-9);
}

TEST_CASE("gamma variance factor equals the numeric derivative of the cdf in the mean")
{
    const double shape = 0.2371702;
    const double mean = 0.4331210;
    const double cp = 3.0;
    const double h = 1e-5 * mean;
    const double dp = oracle::central_diff(
        [&](double m) { return distributions::gamma_cdf({shape, m}, cp); }, mean, h);

    // q = -mean * p'(mean) by the closed form.
    const double q = std::exp(shape * std::log(shape * cp / mean) - shape * cp / mean
                              - specfun::log_gamma(shape));
    CHECK(std::fabs(q - (-dp * mean)) <= 1e-6 * q);
}

TEST_CASE("skew-normal density factor equals the numeric derivative of the cdf")
{
    mc_validate::RngStream rng(4242, 0);
    for (int k = 0; k < 10; ++k) {
        const double mean = rng.next_normal() * 3.0;
        const double sd = 0.5 + rng.next_uniform() * 3.0;
        const double shape = (rng.next_uniform() - 0.5) * 8.0;
        const double cp = mean + (rng.next_uniform() - 0.7) * 2.0 * sd;
        const double h = 1e-5 * sd;
        const double dp = oracle::central_diff(
            [&](double m) {
                return distributions::sn_cdf({m, sd, shape}, cp);
            },
            mean, h);
        const double f = distributions::sn_pdf({mean, sd, shape}, cp);
        CHECK(std::fabs(-dp - f) <= 1e-6 * std::max(f, 1e-8));
    }
}

TEST_CASE("tail complement invariant across estimators")
{
    mc_validate::RngStream rng(777, 0);
    for (int k = 0; k < 20; ++k) {
        const double mean_c = rng.next_normal() * 2.0;
        const double mean_t = mean_c - 0.2 - rng.next_uniform();
        const double sd_t = 0.8 + rng.next_uniform();
        const double sd_c = 0.8 + rng.next_uniform();
        const long n_t = 100 + static_cast<long>(rng.next_uniform() * 400);
        const long n_c = 100 + static_cast<long>(rng.next_uniform() * 400);
        const double cp = mean_c - 1.0 - rng.next_uniform();
        const GroupSummary t{n_t, mean_t, sd_t};
        const GroupSummary c{n_c, mean_c, sd_c};

        const auto check_pair = [&](const ComparisonResult& lo, const ComparisonResult& up) {
            CHECK(up.groups[0].dist_prop == 1.0 - lo.groups[0].dist_prop);
            CHECK(up.groups[1].dist_prop == 1.0 - lo.groups[1].dist_prop);
            CHECK(std::fabs(up.diff.estimate + lo.diff.estimate) < 1e-15);
            CHECK(up.diff.se == lo.diff.se);
            const double rr_up = (1.0 - lo.groups[0].dist_prop) / (1.0 - lo.groups[1].dist_prop);
            CHECK(near(up.risk_ratio.estimate, rr_up, 1e-12));
            CHECK(near(up.odds_ratio.estimate, 1.0 / lo.odds_ratio.estimate, 1e-12));
        };

        check_pair(distcore::dist_normal(t, c, cp, Tail::lower, VarianceAssumption::equal()),
                   distcore::dist_normal(t, c, cp, Tail::upper, VarianceAssumption::equal()));
        check_pair(distcore::dist_skewnormal(t, c, 1.5, cp, Tail::lower),
                   distcore::dist_skewnormal(t, c, 1.5, cp, Tail::upper));

        const GroupSummary gt{n_t, 1.0 + rng.next_uniform(), 1.0};
        const GroupSummary gc{n_c, 1.0 + rng.next_uniform(), 1.0};
        const double gcp = 0.3 + rng.next_uniform();
        check_pair(distcore::dist_gamma(gt, gc, 2.0, gcp, Tail::lower),
                   distcore::dist_gamma(gt, gc, 2.0, gcp, Tail::upper));
    }
}

TEST_CASE("normal reflection invariant")
{
    const ComparisonResult a = distcore::dist_normal(kSmokers, kNonSmokers, 2500.0, Tail::lower,
                                                     VarianceAssumption::equal());
    const GroupSummary rt{483, -3266.965, 437.7330};
    const GroupSummary rc{975, -3452.728, 436.4585};
    const ComparisonResult b =
        distcore::dist_normal(rt, rc, -2500.0, Tail::upper, VarianceAssumption::equal());
    CHECK(std::fabs(a.groups[0].dist_prop - b.groups[0].dist_prop) < 1e-12);
    CHECK(std::fabs(a.groups[1].dist_prop - b.groups[1].dist_prop) < 1e-12);
    CHECK(std::fabs(a.diff.estimate - b.diff.estimate) < 1e-12);
    CHECK(std::fabs(a.diff.se - b.diff.se) < 1e-12);
    CHECK(std::fabs(a.risk_ratio.estimate - b.risk_ratio.estimate)
          <= 1e-12 * a.risk_ratio.estimate);
}

TEST_CASE("odds ratio internally consistent with the reported proportions")
{
    const ComparisonResult r = distcore::dist_normal(kEmployed, kUnemployed, 0.033, Tail::lower,
                                                     VarianceAssumption::known_ratio(1.3));
    const double p_t = r.groups[0].dist_prop;
    const double p_c = r.groups[1].dist_prop;
    const double recomputed = (p_t / (1.0 - p_t)) / (p_c / (1.0 - p_c));
    CHECK(near(r.odds_ratio.estimate, recomputed, 1e-12));
    CHECK(near(r.risk_ratio.estimate, p_t / p_c, 1e-12));
    CHECK(r.diff.estimate == p_t - p_c);
}

TEST_CASE("known ratio 1 equals the equal-variance path bit for bit")
{
    const ComparisonResult eq = distcore::dist_normal(kEmployed, kUnemployed, 0.033, Tail::lower,
                                                      VarianceAssumption::equal());
    const ComparisonResult r1 = distcore::dist_normal(kEmployed, kUnemployed, 0.033, Tail::lower,
                                                      VarianceAssumption::known_ratio(1.0));
    CHECK(std::memcmp(&eq.diff.estimate, &r1.diff.estimate, sizeof(double)) == 0);
    CHECK(std::memcmp(&eq.diff.se, &r1.diff.se, sizeof(double)) == 0);
    CHECK(std::memcmp(&eq.risk_ratio.se, &r1.risk_ratio.se, sizeof(double)) == 0);
    CHECK(std::memcmp(&eq.odds_ratio.ci_upper, &r1.odds_ratio.ci_upper, sizeof(double)) == 0);
    CHECK(eq.groups[0].dist_prop == r1.groups[0].dist_prop);
    CHECK(eq.groups[1].dist_prop == r1.groups[1].dist_prop);
}

TEST_CASE("cut-point outside support precision raises")
{
    const GroupSummary g1{100, 0.0, 1.0};
    const GroupSummary g2{100, 0.2, 1.0};
    CHECK_THROWS_WITH_AS(
        distcore::dist_normal(g1, g2, -12.0, Tail::lower, VarianceAssumption::equal()),
        doctest::Contains("support"), std::domain_error);
    CHECK_THROWS_AS(
        distcore::dist_normal(g1, g2, 12.0, Tail::lower, VarianceAssumption::equal()),
        std::domain_error);
    CHECK_THROWS_AS(distcore::dist_skewnormal(g1, g2, 2.0, -14.0, Tail::lower),
                    std::domain_error);
}

TEST_CASE("effect rows keep their invariants on random inputs")
{
    mc_validate::RngStream rng(31337, 0);
    for (int k = 0; k < 25; ++k) {
        const GroupSummary t{50 + static_cast<long>(rng.next_uniform() * 500),
                             rng.next_normal(), 0.5 + rng.next_uniform()};
        const GroupSummary c{50 + static_cast<long>(rng.next_uniform() * 500),
                             rng.next_normal(), 0.5 + rng.next_uniform()};
        const double cp = (t.mean + c.mean) / 2.0 - 1.0;
        ComparisonResult r;
        try {
            r = distcore::dist_normal(t, c, cp, Tail::lower, VarianceAssumption::equal());
        } catch (const std::domain_error&) {
            continue; // support-precision rejection is fine here
        }
        CHECK(r.diff.ci_lower <= r.diff.estimate);
        CHECK(r.diff.estimate <= r.diff.ci_upper);
        CHECK(r.risk_ratio.estimate > 0.0);
        CHECK(r.odds_ratio.estimate > 0.0);
        CHECK(r.groups[0].dist_prop > 0.0);
        CHECK(r.groups[0].dist_prop < 1.0);
        // Ratio CIs symmetric on the log scale.
        const double mid_rr = std::sqrt(r.risk_ratio.ci_lower * r.risk_ratio.ci_upper);
        CHECK(near(mid_rr, r.risk_ratio.estimate, 1e-10));
    }
}

TEST_CASE("t-test reproduces both worked preambles")
{
    const distcore::TTestResult t1 =
        distcore::t_test(kSmokers, kNonSmokers, distcore::TTestVariant::pooled);
    CHECK(near(t1.t, -7.6418, 1e-4));
    CHECK(t1.df == 1456.0);
    CHECK(near(t1.p_two_sided, 3.864e-14, 1e-2));
    CHECK(near(t1.ci_lower, -233.4477, 1e-4));
    CHECK(near(t1.ci_upper, -138.0791, 1e-4));
    CHECK(t1.mean_exposed == kSmokers.mean);

    const distcore::TTestResult t3 =
        distcore::t_test(kEmployed, kUnemployed, distcore::TTestVariant::welch);
    CHECK(near(t3.t, 1.5199, 1e-4));
    CHECK(std::fabs(t3.df - 1417.4) < 0.1);
    CHECK(near(t3.p_two_sided, 0.1288, 1e-3));
}

TEST_CASE("t-test on identical summaries is null")
{
    const GroupSummary g{60, 5.0, 1.2};
    const distcore::TTestResult t = distcore::t_test(g, g, distcore::TTestVariant::pooled);
    CHECK(t.t == 0.0);
    CHECK(t.p_two_sided == 1.0);
}
