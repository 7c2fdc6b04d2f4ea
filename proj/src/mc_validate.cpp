#include "distdicho/mc_validate.hpp"

#include "distdicho/distributions.hpp"
#include "distdicho/specfun.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace distdicho::mc_validate {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(mix64(seed ^ 0x2545F4914F6CDD1Dull) + stream * kGolden))
{
}

std::uint64_t RngStream::next_u64()
{
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::next_uniform()
{
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal()
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

double RngStream::next_gamma(double shape)
{
    // Marsaglia-Tsang; shape < 1 boosted through shape + 1.
    if (shape < 1.0) {
        const double u = next_uniform();
        return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

std::vector<double> sample(const DistributionSpec& spec, bool exposed_group, long n,
                           RngStream& stream)
{
    const GroupParams& g = exposed_group ? spec.exposed : spec.control;
    std::vector<double> out(static_cast<std::size_t>(n));
    switch (spec.model) {
    case Model::normal:
        for (double& v : out)
            v = g.mean + g.sd * stream.next_normal();
        break;
    case Model::skew_normal: {
        const distributions::SkewNormalDirect d =
            distributions::sn_centred_to_direct({g.mean, g.sd, spec.shape});
        const double delta = spec.shape / std::sqrt(1.0 + spec.shape * spec.shape);
        const double rem = std::sqrt(1.0 - delta * delta);
        for (double& v : out) {
            const double z1 = stream.next_normal();
            const double z2 = stream.next_normal();
            v = d.location + d.scale * (delta * std::fabs(z1) + rem * z2);
        }
        break;
    }
    case Model::gamma: {
        const double scale = g.mean / spec.shape;
        for (double& v : out)
            v = scale * stream.next_gamma(spec.shape);
        break;
    }
    }
    return out;
}

namespace {

struct RepOutcome {
    bool ok = false;
    double diff_est = 0.0, diff_se = 0.0;
    double rr_est = 0.0, rr_selog = 0.0;
    double or_est = 0.0, or_selog = 0.0;
    double prop_exposed = 0.0, prop_control = 0.0;
};

fitting::GroupSummary summarize(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : xs) {
        const double d = v - mean;
        ss += d * d;
    }
    return {static_cast<long>(xs.size()), mean, std::sqrt(ss / (n - 1.0))};
}

distcore::ComparisonResult estimate(const SimScenario& s, const fitting::GroupSummary& exposed,
                                    const fitting::GroupSummary& control)
{
    switch (s.distribution.model) {
    case Model::normal:
        return distcore::dist_normal(exposed, control, s.cut_point, s.tail, s.assumption);
    case Model::skew_normal:
        return distcore::dist_skewnormal(exposed, control, s.distribution.shape, s.cut_point,
                                         s.tail);
    case Model::gamma:
        return distcore::dist_gamma(exposed, control, s.distribution.shape, s.cut_point, s.tail);
    }
    throw std::logic_error("estimate: unreachable");
}

double true_proportion(const DistributionSpec& spec, bool exposed_group, double cut_point,
                       distcore::Tail tail)
{
    const GroupParams& g = exposed_group ? spec.exposed : spec.control;
    double lower = 0.0;
    switch (spec.model) {
    case Model::normal:
        lower = specfun::normal_cdf((cut_point - g.mean) / g.sd);
        break;
    case Model::skew_normal:
        lower = distributions::sn_cdf({g.mean, g.sd, spec.shape}, cut_point);
        break;
    case Model::gamma:
        lower = distributions::gamma_cdf({spec.shape, g.mean}, cut_point);
        break;
    }
    return tail == distcore::Tail::upper ? 1.0 - lower : lower;
}

RepOutcome run_one(const SimScenario& s, std::uint64_t rep_index)
{
    RngStream stream(s.seed, rep_index);
    RepOutcome out;
    try {
        const std::vector<double> xs = sample(s.distribution, true, s.n_exposed, stream);
        const std::vector<double> ys = sample(s.distribution, false, s.n_control, stream);
        const distcore::ComparisonResult r = estimate(s, summarize(xs), summarize(ys));
        out.ok = true;
        out.diff_est = r.diff.estimate;
        out.diff_se = r.diff.se;
        out.rr_est = r.risk_ratio.estimate;
        out.rr_selog = *r.risk_ratio.se_log;
        out.or_est = r.odds_ratio.estimate;
        out.or_selog = *r.odds_ratio.se_log;
        out.prop_exposed = r.groups[0].dist_prop;
        out.prop_control = r.groups[1].dist_prop;
    } catch (const std::exception&) {
        out.ok = false;
    }
    return out;
}

// Ordered reduction over per-replication outcomes.
EffectStats reduce_effect(const std::vector<RepOutcome>& reps, double true_value, bool log_scale,
                          double (*est_of)(const RepOutcome&),
                          double (*se_of)(const RepOutcome&))
{
    const double q = specfun::normal_quantile(0.975);
    double sum = 0.0;
    long n_ok = 0;
    long covered = 0;
    for (const RepOutcome& r : reps) {
        if (!r.ok)
            continue;
        const double est = est_of(r);
        const double se = se_of(r);
        sum += est;
        ++n_ok;
        double lo;
        double hi;
        if (log_scale) {
            lo = std::exp(std::log(est) - q * se);
            hi = std::exp(std::log(est) + q * se);
        } else {
            lo = est - q * se;
            hi = est + q * se;
        }
        if (lo <= true_value && true_value <= hi)
            ++covered;
    }
    EffectStats stats{};
    stats.true_value = true_value;
    if (n_ok == 0)
        return stats;
    stats.mean_estimate = sum / static_cast<double>(n_ok);
    double ss = 0.0;
    double se_sum = 0.0;
    for (const RepOutcome& r : reps) {
        if (!r.ok)
            continue;
        const double d = est_of(r) - stats.mean_estimate;
        ss += d * d;
        // Formula SE on the estimate scale: est * se_log for ratio effects.
        se_sum += log_scale ? est_of(r) * se_of(r) : se_of(r);
    }
    stats.empirical_sd = n_ok > 1 ? std::sqrt(ss / static_cast<double>(n_ok - 1)) : 0.0;
    stats.mean_formula_se = se_sum / static_cast<double>(n_ok);
    stats.coverage = static_cast<double>(covered) / static_cast<double>(n_ok);
    return stats;
}

} // namespace

SimReport run_scenario(const SimScenario& s, int jobs)
{
    if (s.reps < 100)
        throw std::domain_error("run_scenario: requires reps >= 100");
    if (s.n_exposed < 2 || s.n_control < 2)
        throw std::domain_error("run_scenario: requires group sizes >= 2");
    if (jobs < 1)
        jobs = 1;

    std::vector<RepOutcome> reps(static_cast<std::size_t>(s.reps));
    if (jobs == 1) {
        for (long i = 0; i < s.reps; ++i)
            reps[static_cast<std::size_t>(i)] = run_one(s, static_cast<std::uint64_t>(i));
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                for (long i = w; i < s.reps; i += jobs)
                    reps[static_cast<std::size_t>(i)] = run_one(s, static_cast<std::uint64_t>(i));
            });
        }
        for (std::thread& t : workers)
            t.join();
    }

    const double pt = true_proportion(s.distribution, true, s.cut_point, s.tail);
    const double pc = true_proportion(s.distribution, false, s.cut_point, s.tail);
    const double true_diff = pt - pc;
    const double true_rr = pt / pc;
    const double true_or = (pt / (1.0 - pt)) / (pc / (1.0 - pc));

    SimReport report{};
    report.reps = s.reps;
    report.diff = reduce_effect(
        reps, true_diff, false, [](const RepOutcome& r) { return r.diff_est; },
        [](const RepOutcome& r) { return r.diff_se; });
    report.rr = reduce_effect(
        reps, true_rr, true, [](const RepOutcome& r) { return r.rr_est; },
        [](const RepOutcome& r) { return r.rr_selog; });
    report.odds = reduce_effect(
        reps, true_or, true, [](const RepOutcome& r) { return r.or_est; },
        [](const RepOutcome& r) { return r.or_selog; });
    report.true_prop_exposed = pt;
    report.true_prop_control = pc;

    long n_ok = 0;
    double sum_pt = 0.0;
    double sum_pc = 0.0;
    for (const RepOutcome& r : reps) {
        if (!r.ok)
            continue;
        ++n_ok;
        sum_pt += r.prop_exposed;
        sum_pc += r.prop_control;
    }
    report.failures = s.reps - n_ok;
    report.mean_prop_exposed = n_ok > 0 ? sum_pt / static_cast<double>(n_ok) : 0.0;
    report.mean_prop_control = n_ok > 0 ? sum_pc / static_cast<double>(n_ok) : 0.0;
    return report;
}

namespace {

Model model_from_string(const std::string& name)
{
    if (name == "normal")
        return Model::normal;
    if (name == "skew_normal" || name == "sk_normal")
        return Model::skew_normal;
    if (name == "gamma")
        return Model::gamma;
    throw std::domain_error("unknown model '" + name + "'");
}

distcore::VarianceAssumption assumption_from_json(const nlohmann::json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "equal")
        return distcore::VarianceAssumption::equal();
    if (kind == "known_ratio")
        return distcore::VarianceAssumption::known_ratio(j.at("ratio").get<double>());
    if (kind == "unknown_unequal")
        return distcore::VarianceAssumption::unknown_unequal();
    throw std::domain_error("unknown variance assumption '" + kind + "'");
}

} // namespace

SimScenario scenario_from_json_text(const std::string& text)
{
    const nlohmann::json j = nlohmann::json::parse(text);
    SimScenario s;
    const nlohmann::json& d = j.at("distribution");
    s.distribution.model = model_from_string(d.at("model").get<std::string>());
    s.distribution.shape = d.value("shape", 0.0);
    s.distribution.exposed.mean = d.at("exposed").at("mean").get<double>();
    s.distribution.exposed.sd = d.at("exposed").value("sd", 1.0);
    s.distribution.control.mean = d.at("control").at("mean").get<double>();
    s.distribution.control.sd = d.at("control").value("sd", 1.0);
    s.n_exposed = j.at("n_exposed").get<long>();
    s.n_control = j.at("n_control").get<long>();
    s.cut_point = j.at("cut_point").get<double>();
    const std::string tail = j.value("tail", std::string("lower"));
    if (tail != "lower" && tail != "upper")
        throw std::domain_error("tail must be 'lower' or 'upper'");
    s.tail = tail == "upper" ? distcore::Tail::upper : distcore::Tail::lower;
    if (j.contains("assumption"))
        s.assumption = assumption_from_json(j.at("assumption"));
    s.reps = j.at("reps").get<long>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

std::string report_to_json_text(const SimReport& report)
{
    const auto effect_map = [](double diff_v, double rr_v, double or_v) {
        return nlohmann::json{{"diff", diff_v}, {"rr", rr_v}, {"or", or_v}};
    };
    nlohmann::json j;
    j["true_effects"] =
        effect_map(report.diff.true_value, report.rr.true_value, report.odds.true_value);
    j["mean_estimates"] = effect_map(report.diff.mean_estimate, report.rr.mean_estimate,
                                     report.odds.mean_estimate);
    j["empirical_sd"] =
        effect_map(report.diff.empirical_sd, report.rr.empirical_sd, report.odds.empirical_sd);
    j["mean_formula_se"] = effect_map(report.diff.mean_formula_se, report.rr.mean_formula_se,
                                      report.odds.mean_formula_se);
    j["coverage"] = effect_map(report.diff.coverage, report.rr.coverage, report.odds.coverage);
    j["mean_props"] = nlohmann::json{{"exposed", report.mean_prop_exposed},
                                     {"control", report.mean_prop_control}};
    j["true_props"] = nlohmann::json{{"exposed", report.true_prop_exposed},
                                     {"control", report.true_prop_control}};
    j["failures"] = report.failures;
    j["reps"] = report.reps;
    return j.dump(2) + "\n";
}

} // namespace distdicho::mc_validate
