#include "distdicho/cli.hpp"

#include "distdicho/dataset.hpp"
#include "distdicho/distcore.hpp"
#include "distdicho/fitting.hpp"
#include "distdicho/formula.hpp"
#include "distdicho/mc_validate.hpp"
#include "distdicho/regadjust.hpp"
#include "distdicho/render.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

namespace distdicho::cli {

namespace {

struct CommonFlags {
    double cut_point = 0.0;
    std::string tail = "lower";
    double level = 0.95;
    std::string format = "text";
};

distcore::Tail parse_tail(const std::string& tail)
{
    if (tail == "lower")
        return distcore::Tail::lower;
    if (tail == "upper")
        return distcore::Tail::upper;
    throw std::runtime_error("tail must be 'lower' or 'upper'");
}

// --ratio 0 is the documented alias for --uneq.
distcore::VarianceAssumption parse_assumption(const std::optional<double>& ratio, bool uneq)
{
    if (uneq || (ratio && *ratio == 0.0))
        return distcore::VarianceAssumption::unknown_unequal();
    if (ratio) {
        if (*ratio < 0.0)
            throw std::runtime_error("--ratio must be >= 0");
        return distcore::VarianceAssumption::known_ratio(*ratio);
    }
    return distcore::VarianceAssumption::equal();
}

struct TwoGroupData {
    fitting::GroupSummary exposed;
    fitting::GroupSummary control;
    distcore::GroupLabels labels;
    std::vector<double> values;       // retained rows
    std::vector<std::string> groups;  // parallel labels
    long n_dropped = 0;
};

fitting::GroupSummary summarize(const std::vector<double>& xs)
{
    if (xs.size() < 2)
        throw std::runtime_error("each group requires at least 2 observations");
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : xs) {
        const double d = v - mean;
        ss += d * d;
    }
    return {static_cast<long>(xs.size()), mean, std::sqrt(ss / (n - 1.0))};
}

TwoGroupData load_two_groups(const std::string& path, const std::string& outcome,
                             const std::string& group, const std::string& exposed_level)
{
    const Dataset data = Dataset::from_csv_file(path);
    const Column& outcome_col = data.column(outcome);
    if (!outcome_col.numeric)
        throw std::runtime_error("outcome '" + outcome + "' is not numeric");
    const Column& group_col = data.column(group);

    TwoGroupData out;
    std::vector<double> exposed_values;
    std::vector<double> control_values;
    std::string control_level;
    bool seen_exposed = false;
    for (std::size_t i = 0; i < data.row_count(); ++i) {
        if (outcome_col.missing[i] || group_col.missing[i]) {
            ++out.n_dropped;
            continue;
        }
        const std::string& level = group_col.raw[i];
        if (level == exposed_level) {
            seen_exposed = true;
            exposed_values.push_back(outcome_col.values[i]);
        } else {
            if (control_level.empty())
                control_level = level;
            else if (level != control_level)
                throw std::runtime_error(
                    "group '" + group
                    + "' has more than two levels; use regdicho for multi-level exposures");
            control_values.push_back(outcome_col.values[i]);
        }
        out.values.push_back(outcome_col.values[i]);
        out.groups.push_back(level);
    }
    if (!seen_exposed)
        throw std::runtime_error("exposed level '" + exposed_level + "' not found in '" + group
                                 + "'");
    if (control_level.empty())
        throw std::runtime_error("group '" + group + "' has a single level");

    out.exposed = summarize(exposed_values);
    out.control = summarize(control_values);
    out.labels = {exposed_level, control_level};
    return out;
}

void emit_dropped(std::ostream& out, long n_dropped)
{
    if (n_dropped > 0)
        out << "(" << n_dropped << " observations deleted due to missingness)\n\n";
}

void emit_dicho_output(std::ostream& out, const std::string& format,
                       const distcore::TTestResult& ttest,
                       const distcore::ComparisonResult& result, long n_dropped,
                       bool from_data)
{
    if (format == "json") {
        nlohmann::json j;
        j["t_test"] = ttest_to_json(ttest);
        j["comparison"] = comparison_to_json(result);
        if (from_data)
            j["n_dropped"] = n_dropped;
        out << j.dump(2) << '\n';
        return;
    }
    if (from_data)
        emit_dropped(out, n_dropped);
    out << render_ttest_text(ttest);
    out << render_comparison_text(result);
}

int cmd_dicho_like(std::ostream& out, const std::string& data_path, const std::string& outcome,
                   const std::string& group, const std::string& exposed_level,
                   const CommonFlags& common, const std::optional<double>& ratio, bool uneq,
                   // dichogen extras; dist empty means plain dicho
                   const std::string& dist, std::optional<double> alpha, double shift,
                   // summary-mode inputs (dichoi / dichogen)
                   const std::optional<fitting::GroupSummary>& sum1,
                   const std::optional<fitting::GroupSummary>& sum2)
{
    const distcore::Tail tail = parse_tail(common.tail);
    const distcore::VarianceAssumption assumption = parse_assumption(ratio, uneq);

    const bool summary_mode = sum1.has_value();
    const bool is_gen = !dist.empty();
    if (is_gen && dist != "normal" && dist != "sk_normal" && dist != "gamma")
        throw std::runtime_error("--dist must be normal, sk_normal or gamma");
    if (is_gen && dist != "normal"
        && assumption.kind != distcore::VarianceAssumption::Kind::equal)
        throw std::runtime_error("--ratio/--uneq apply to the normal model only");
    if (shift != 0.0 && dist != "gamma")
        throw std::runtime_error("--shift applies to the gamma model only");

    TwoGroupData data;
    if (summary_mode) {
        data.exposed = *sum1;
        data.control = *sum2;
        data.labels = {"exposed", "control"};
        if (is_gen && dist != "normal" && !alpha)
            throw std::runtime_error("--alpha is required with summary input");
    } else {
        data = load_two_groups(data_path, outcome, group, exposed_level);
    }

    double cut_point = common.cut_point;
    if (is_gen && dist == "gamma" && shift != 0.0) {
        // Model X + shift ~ gamma: shift the outcome and the cut-point together.
        cut_point += shift;
        data.exposed.mean += shift;
        data.control.mean += shift;
        for (double& v : data.values)
            v += shift;
    }

    distcore::ComparisonResult result = [&] {
        if (!is_gen || dist == "normal")
            return distcore::dist_normal(data.exposed, data.control, cut_point, tail,
                                         assumption, common.level, data.labels);
        if (dist == "sk_normal") {
            const double a = alpha ? *alpha : fitting::fit_sn_shape(data.values, data.groups);
            return distcore::dist_skewnormal(data.exposed, data.control, a, cut_point, tail,
                                             common.level, data.labels);
        }
        const double a = alpha ? *alpha : fitting::fit_gamma_shape(data.values, data.groups);
        return distcore::dist_gamma(data.exposed, data.control, a, cut_point, tail,
                                    common.level, data.labels);
    }();

    const distcore::TTestVariant variant =
        assumption.kind == distcore::VarianceAssumption::Kind::equal
        ? distcore::TTestVariant::pooled
        : distcore::TTestVariant::welch;
    const distcore::TTestResult ttest =
        distcore::t_test(data.exposed, data.control, variant, common.level);

    emit_dicho_output(out, common.format, ttest, result, data.n_dropped, !summary_mode);
    return 0;
}

int cmd_regdicho(std::ostream& out, const std::string& data_path, const std::string& formula_text,
                 const std::string& group_var, const std::string& reference,
                 const std::string& summary_path, const CommonFlags& common)
{
    const distcore::Tail tail = parse_tail(common.tail);

    regadjust::AdjustedModelSummary summary;
    long n_dropped = 0;
    bool from_data = false;
    if (!summary_path.empty()) {
        std::ifstream in(summary_path);
        if (!in)
            throw std::runtime_error("cannot open '" + summary_path + "'");
        nlohmann::json j;
        in >> j;
        summary = adjusted_summary_from_json(j);
    } else {
        from_data = true;
        if (group_var.empty())
            throw std::runtime_error("--group-var is required with --data");
        const Dataset data = Dataset::from_csv_file(data_path);
        const Formula formula = parse_formula(formula_text);
        const DesignMatrix design = build_design(data, formula, group_var, reference);
        fitting::FittedLinearModel model =
            fitting::ols_fit(design.columns, design.labels, design.response);
        model.level_counts = design.group_level_counts;
        n_dropped = design.n_dropped;
        summary = regadjust::from_ols(model, group_var);
    }

    const std::vector<distcore::ComparisonResult> results =
        regadjust::adjusted_comparisons(summary, common.cut_point, tail, common.level);

    if (common.format == "json") {
        nlohmann::json j;
        j["comparisons"] = nlohmann::json::array();
        for (const auto& r : results)
            j["comparisons"].push_back(comparison_to_json(r));
        if (from_data)
            j["n_dropped"] = n_dropped;
        out << j.dump(2) << '\n';
        return 0;
    }
    if (from_data)
        emit_dropped(out, n_dropped);
    out << render_comparison_list_text(results);
    return 0;
}

int cmd_simulate(std::ostream& out, const std::string& scenario_path, int jobs,
                 const std::optional<std::uint64_t>& seed_override)
{
    std::ifstream in(scenario_path);
    if (!in)
        throw std::runtime_error("cannot open '" + scenario_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    mc_validate::SimScenario scenario = mc_validate::scenario_from_json_text(buffer.str());
    if (seed_override)
        scenario.seed = *seed_override;
    const mc_validate::SimReport report = mc_validate::run_scenario(scenario, jobs);
    out << mc_validate::report_to_json_text(report);
    return 0;
}

void add_common_flags(CLI::App* cmd, CommonFlags& common, bool need_cp = true)
{
    auto* cp = cmd->add_option("--cp", common.cut_point, "Cut-point defining the binary outcome");
    if (need_cp)
        cp->required();
    cmd->add_option("--tail", common.tail, "Tail of interest: lower or upper")
        ->check(CLI::IsMember({"lower", "upper"}))
        ->capture_default_str();
    cmd->add_option("--level", common.level, "Confidence level")->capture_default_str();
    cmd->add_option("--format", common.format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Distributional estimates for dichotomised continuous outcomes"};
    app.name("distdicho");
    app.require_subcommand(1);

    // ---- dicho ----
    struct {
        std::string data, outcome, group, exposed;
        CommonFlags common;
        std::optional<double> ratio;
        bool uneq = false;
    } dicho;
    {
        CLI::App* cmd = app.add_subcommand(
            "dicho", "Two-group comparison from raw data under the normal model");
        cmd->add_option("--data", dicho.data, "CSV file")->required();
        cmd->add_option("--outcome", dicho.outcome, "Outcome column")->required();
        cmd->add_option("--group", dicho.group, "Group column (two levels)")->required();
        cmd->add_option("--exposed", dicho.exposed, "Level treated as exposed")->required();
        add_common_flags(cmd, dicho.common);
        auto* ratio_opt = cmd->add_option(
            "--ratio", dicho.ratio,
            "Known variance ratio var(exposed)/var(control); 0 means --uneq");
        cmd->add_flag("--uneq", dicho.uneq, "Unknown variance ratio (corrected SEs)")
            ->excludes(ratio_opt);
    }

    // ---- dichoi ----
    struct {
        fitting::GroupSummary g1{0, 0.0, 0.0};
        fitting::GroupSummary g2{0, 0.0, 0.0};
        CommonFlags common;
        std::optional<double> ratio;
        bool uneq = false;
    } dichoi;
    {
        CLI::App* cmd = app.add_subcommand(
            "dichoi", "Two-group comparison from summary statistics (normal model)");
        cmd->add_option("--n1", dichoi.g1.n, "Exposed group size")->required();
        cmd->add_option("--m1", dichoi.g1.mean, "Exposed group mean")->required();
        cmd->add_option("--s1", dichoi.g1.sd, "Exposed group SD")->required();
        cmd->add_option("--n2", dichoi.g2.n, "Control group size")->required();
        cmd->add_option("--m2", dichoi.g2.mean, "Control group mean")->required();
        cmd->add_option("--s2", dichoi.g2.sd, "Control group SD")->required();
        add_common_flags(cmd, dichoi.common);
        auto* ratio_opt = cmd->add_option(
            "--ratio", dichoi.ratio,
            "Known variance ratio var(exposed)/var(control); 0 means --uneq");
        cmd->add_flag("--uneq", dichoi.uneq, "Unknown variance ratio (corrected SEs)")
            ->excludes(ratio_opt);
    }

    // ---- dichogen ----
    struct {
        std::string data, outcome, group, exposed;
        std::string dist = "normal";
        std::optional<double> alpha;
        double shift = 0.0;
        std::optional<long> n1, n2;
        std::optional<double> m1, s1, m2, s2;
        CommonFlags common;
        std::optional<double> ratio;
        bool uneq = false;
    } gen;
    {
        CLI::App* cmd = app.add_subcommand(
            "dichogen", "Two-group comparison under a normal, skew-normal or gamma model");
        cmd->add_option("--data", gen.data, "CSV file");
        cmd->add_option("--outcome", gen.outcome, "Outcome column");
        cmd->add_option("--group", gen.group, "Group column (two levels)");
        cmd->add_option("--exposed", gen.exposed, "Level treated as exposed");
        cmd->add_option("--dist", gen.dist, "Outcome model: normal, sk_normal or gamma")
            ->check(CLI::IsMember({"normal", "sk_normal", "gamma"}))
            ->capture_default_str();
        cmd->add_option("--alpha", gen.alpha, "Known shape parameter (fitted when absent)");
        cmd->add_option("--shift", gen.shift,
                        "Positive shift added to the outcome and cut-point (gamma only)");
        cmd->add_option("--n1", gen.n1, "Exposed group size (summary input)");
        cmd->add_option("--m1", gen.m1, "Exposed group mean (summary input)");
        cmd->add_option("--s1", gen.s1, "Exposed group SD (summary input)");
        cmd->add_option("--n2", gen.n2, "Control group size (summary input)");
        cmd->add_option("--m2", gen.m2, "Control group mean (summary input)");
        cmd->add_option("--s2", gen.s2, "Control group SD (summary input)");
        add_common_flags(cmd, gen.common);
        auto* ratio_opt = cmd->add_option(
            "--ratio", gen.ratio,
            "Known variance ratio var(exposed)/var(control); 0 means --uneq");
        cmd->add_flag("--uneq", gen.uneq, "Unknown variance ratio (corrected SEs)")
            ->excludes(ratio_opt);
    }

    // ---- regdicho ----
    struct {
        std::string data, formula, group_var, reference, summary;
        CommonFlags common;
    } reg;
    {
        CLI::App* cmd = app.add_subcommand(
            "regdicho", "Regression-adjusted comparisons per exposure level");
        cmd->add_option("--data", reg.data, "CSV file");
        cmd->add_option("--formula", reg.formula, "Model formula, e.g. \"y ~ g + x\"");
        cmd->add_option("--group-var", reg.group_var, "Exposure variable (categorical)");
        cmd->add_option("--reference", reg.reference, "Reference level (default: smallest)");
        cmd->add_option("--summary", reg.summary,
                        "AdjustedModelSummary JSON file (alternative to --data)");
        add_common_flags(cmd, reg.common);
    }

    // ---- simulate ----
    struct {
        std::string scenario;
        int jobs = 1;
        std::optional<std::uint64_t> seed;
    } sim;
    {
        CLI::App* cmd = app.add_subcommand("simulate", "Monte-Carlo validation of a scenario");
        cmd->add_option("--scenario", sim.scenario, "Scenario JSON file")->required();
        cmd->add_option("--jobs", sim.jobs, "Worker threads")->capture_default_str();
        cmd->add_option("--seed", sim.seed, "Override the scenario seed");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("dicho"))
            return cmd_dicho_like(out, dicho.data, dicho.outcome, dicho.group, dicho.exposed,
                                  dicho.common, dicho.ratio, dicho.uneq, "", std::nullopt, 0.0,
                                  std::nullopt, std::nullopt);
        if (app.got_subcommand("dichoi"))
            return cmd_dicho_like(out, "", "", "", "", dichoi.common, dichoi.ratio, dichoi.uneq,
                                  "", std::nullopt, 0.0, dichoi.g1, dichoi.g2);
        if (app.got_subcommand("dichogen")) {
            const bool summary_mode = gen.n1.has_value() || gen.m1.has_value();
            if (summary_mode) {
                if (!(gen.n1 && gen.m1 && gen.s1 && gen.n2 && gen.m2 && gen.s2))
                    throw std::runtime_error(
                        "summary input requires all of --n1 --m1 --s1 --n2 --m2 --s2");
                const fitting::GroupSummary g1{*gen.n1, *gen.m1, *gen.s1};
                const fitting::GroupSummary g2{*gen.n2, *gen.m2, *gen.s2};
                return cmd_dicho_like(out, "", "", "", "", gen.common, gen.ratio, gen.uneq,
                                      gen.dist, gen.alpha, gen.shift, g1, g2);
            }
            if (gen.data.empty() || gen.outcome.empty() || gen.group.empty()
                || gen.exposed.empty())
                throw std::runtime_error(
                    "dichogen requires --data/--outcome/--group/--exposed or summary input");
            return cmd_dicho_like(out, gen.data, gen.outcome, gen.group, gen.exposed, gen.common,
                                  gen.ratio, gen.uneq, gen.dist, gen.alpha, gen.shift,
                                  std::nullopt, std::nullopt);
        }
        if (app.got_subcommand("regdicho")) {
            if (reg.summary.empty() && reg.data.empty())
                throw std::runtime_error("regdicho requires --data with --formula, or --summary");
            if (reg.summary.empty() && reg.formula.empty())
                throw std::runtime_error("--formula is required with --data");
            return cmd_regdicho(out, reg.data, reg.formula, reg.group_var, reg.reference,
                                reg.summary, reg.common);
        }
        if (app.got_subcommand("simulate"))
            return cmd_simulate(out, sim.scenario, sim.jobs, sim.seed);
    } catch (const std::exception& e) {
        err << "distdicho: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run_main(int argc, char** argv)
{
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 1 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace distdicho::cli
