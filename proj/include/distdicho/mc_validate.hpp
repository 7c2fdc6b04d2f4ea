#pragma once

#include "distdicho/distcore.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Monte-Carlo validation harness: draws two-group samples from a chosen
// model, reruns the matching estimator per replication, and reports
// empirical SD, bias and CI coverage against the analytic truth.
// Replications use counter-derived independent substreams, so a report is
// bit-identical for any worker count.

namespace distdicho::mc_validate {

enum class Model { normal, skew_normal, gamma };

struct GroupParams {
    double mean;
    double sd; // ignored for gamma (sd = mean / sqrt(shape))
};

struct DistributionSpec {
    Model model = Model::normal;
    double shape = 0.0; // skew-normal alpha or gamma shape
    GroupParams exposed{0.0, 1.0};
    GroupParams control{0.0, 1.0};
};

struct SimScenario {
    DistributionSpec distribution;
    long n_exposed = 0;
    long n_control = 0;
    double cut_point = 0.0;
    distcore::Tail tail = distcore::Tail::lower;
    distcore::VarianceAssumption assumption = distcore::VarianceAssumption::equal();
    long reps = 0; // >= 100
    std::uint64_t seed = 0;
};

struct EffectStats {
    double true_value;
    double mean_estimate;
    double empirical_sd;
    double mean_formula_se;
    double coverage;
};

struct SimReport {
    EffectStats diff;
    EffectStats rr;
    EffectStats odds; // "or" in serialized form
    double mean_prop_exposed;
    double mean_prop_control;
    double true_prop_exposed;
    double true_prop_control;
    long failures;
    long reps;
};

/// Counter-based substream: value k of stream (seed, stream) is a strong
/// 64-bit mix of a Weyl sequence, period 2^64.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double next_uniform(); // (0, 1)
    double next_normal();
    double next_gamma(double shape);

private:
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// Draw n observations from the scenario distribution for one group.
std::vector<double> sample(const DistributionSpec& spec, bool exposed_group, long n,
                           RngStream& stream);

/// Run the scenario; deterministic given the seed for any `jobs`.
SimReport run_scenario(const SimScenario& scenario, int jobs = 1);

/// JSON round-trip for scenario files and reports.
SimScenario scenario_from_json_text(const std::string& text);
std::string report_to_json_text(const SimReport& report);

} // namespace distdicho::mc_validate
