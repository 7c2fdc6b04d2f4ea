#include "distdicho/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace distdicho::cli {

namespace {

const char* kRule = "======================================================";
const char* kTTestBanner = "===              t-Test                            ===";
const char* kDistBanner = "===              Distributional method             ===";
const char* kDashes = "------------------------------------------------------";

std::string fixed(double x, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

// Decimal places needed so x shows `sig` significant digits in fixed form.
int decimals_for(double x, int sig)
{
    if (x == 0.0 || !std::isfinite(x))
        return 0;
    const int exp10 = static_cast<int>(std::floor(std::log10(std::fabs(x))));
    return std::max(0, sig - 1 - exp10);
}

std::string rjust(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// Right-aligned table with a single-space separator and a leading space.
std::string render_table(const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size())
            widths.resize(row.size(), 0);
        for (std::size_t j = 0; j < row.size(); ++j)
            widths[j] = std::max(widths[j], row[j].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out += ' ';
            out += rjust(row[j], widths[j]);
        }
        out += '\n';
    }
    return out;
}

// Formats one numeric column with shared decimals (>= 7 significant digits
// for every entry).
std::vector<std::string> format_column(const std::vector<double>& values)
{
    int decimals = 0;
    for (double v : values)
        decimals = std::max(decimals, decimals_for(v, 7));
    std::vector<std::string> out;
    out.reserve(values.size());
    for (double v : values)
        out.push_back(fixed(v, decimals));
    return out;
}

std::string tail_word(distcore::Tail tail)
{
    return tail == distcore::Tail::upper ? "above" : "below";
}

std::string assumption_line(const distcore::VarianceAssumption& a)
{
    using Kind = distcore::VarianceAssumption::Kind;
    switch (a.kind) {
    case Kind::equal:
        return "Standard error computed under the hypothesis that the ratio of variances is "
               "equal to 1 ";
    case Kind::known_ratio:
        return "Standard error computed under the hypothesis that the ratio of variances is "
               "equal to "
            + format_signif(a.ratio, 7) + " ";
    case Kind::unknown_unequal:
        return "Standard error computed with correction for unknown variance ratio";
    }
    return {};
}

} // namespace

std::string format_signif(double x, int digits)
{
    if (!std::isfinite(x)) {
        if (std::isnan(x))
            return "NaN";
        return x > 0 ? "Inf" : "-Inf";
    }
    if (x == 0.0)
        return "0";

    const int exp10 = static_cast<int>(std::floor(std::log10(std::fabs(x))));
    if (exp10 >= digits + 4 || exp10 < -5) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
        return buf;
    }

    const int decimals = digits - 1 - exp10;
    std::string s = fixed(x, std::max(0, decimals));
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0')
            s.pop_back();
        if (s.back() == '.')
            s.pop_back();
    }
    return s;
}

std::string format_pvalue(double p)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", p);
    return buf;
}

std::string render_ttest_text(const distcore::TTestResult& t)
{
    std::ostringstream out;
    out << kRule << '\n' << kTTestBanner << '\n' << kRule << '\n';
    out << '\n';
    out << '\t' << (t.variant == distcore::TTestVariant::welch ? "Welch Two Sample t-test"
                                                               : "Two Sample t-test")
        << '\n';
    out << '\n';
    out << "data:  x and y\n";
    out << "t = " << format_signif(t.t, 5) << ", df = " << format_signif(t.df, 5)
        << ", p-value = " << format_pvalue(t.p_two_sided) << '\n';
    out << "alternative hypothesis: true difference in means is not equal to 0\n";
    out << format_signif(t.level * 100.0, 7) << " percent confidence interval:\n";
    const std::vector<std::string> ci = format_column({t.ci_lower, t.ci_upper});
    out << ' ' << ci[0] << ' ' << ci[1] << '\n';
    out << "sample estimates:\n";
    const std::vector<std::string> means = format_column({t.mean_exposed, t.mean_control});
    const std::size_t w = std::max<std::size_t>(9, std::max(means[0].size(), means[1].size()));
    out << "mean of x mean of y \n";
    out << rjust(means[0], w) << ' ' << rjust(means[1], w) << " \n";
    out << '\n';
    return out.str();
}

std::string render_comparison_text(const distcore::ComparisonResult& result,
                                   const RenderOptions& options)
{
    std::ostringstream out;
    out << kRule << '\n' << kDistBanner << '\n' << kRule << '\n';
    out << "Distributional estimates for the comparison of proportions " << tail_word(result.tail)
        << " the cut-point " << format_signif(result.cut_point, 7) << " \n";
    out << assumption_line(result.assumption) << '\n';
    out << '\n';
    if (result.shape) {
        out << "Alpha: " << format_signif(*result.shape, 7) << " \n";
        out << '\n';
    }

    {
        const auto& g = result.groups;
        const std::vector<std::string> means =
            format_column({g[0].mean, g[1].mean});
        const std::vector<std::string> sds = format_column({g[0].sd, g[1].sd});
        const std::vector<std::string> props =
            format_column({g[0].dist_prop, g[1].dist_prop});
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"Group", "Obs", "Mean", "Std.Dev", "Dist.prop."});
        for (int i = 0; i < 2; ++i)
            rows.push_back({g[i].label, std::to_string(g[i].n), means[i], sds[i], props[i]});
        out << render_table(rows);
    }

    out << '\n' << kDashes << '\n';

    {
        const auto& d = result.diff;
        const auto& rr = result.risk_ratio;
        const auto& orr = result.odds_ratio;
        const std::vector<std::string> est =
            format_column({d.estimate, rr.estimate, orr.estimate});
        const std::vector<std::string> se = format_column({d.se, rr.se, orr.se});
        const std::vector<std::string> lo =
            format_column({d.ci_lower, rr.ci_lower, orr.ci_lower});
        const std::vector<std::string> hi =
            format_column({d.ci_upper, rr.ci_upper, orr.ci_upper});
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"Stat", "Estimate", "Std.Err", "CI.lower", "CI.upper"});
        const char* names[3] = {"Diff. prop", "Risk ratio", "Odds ratio"};
        for (int i = 0; i < 3; ++i)
            rows.push_back({names[i], est[i], se[i], lo[i], hi[i]});
        out << render_table(rows);
    }

    out << '\n' << kDashes << '\n';
    out << "* " << format_signif(result.level * 100.0, 7) << " percent confidence interval\n";
    if (options.dicho_footer) {
        out << "* confidence interval calculated using distributional standard error \n";
        out << '\n';
    }
    out << kDashes << '\n';
    return out.str();
}

std::string render_comparison_list_text(const std::vector<distcore::ComparisonResult>& results)
{
    std::string out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out += "[[" + std::to_string(i + 1) + "]]\n";
        out += render_comparison_text(results[i], {.dicho_footer = false});
    }
    return out;
}

namespace {

nlohmann::json assumption_to_json(const distcore::VarianceAssumption& a)
{
    using Kind = distcore::VarianceAssumption::Kind;
    switch (a.kind) {
    case Kind::equal:
        return {{"kind", "equal"}};
    case Kind::known_ratio:
        return {{"kind", "known_ratio"}, {"ratio", a.ratio}};
    case Kind::unknown_unequal:
        return {{"kind", "unknown_unequal"}};
    }
    return {};
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
    throw std::runtime_error("unknown variance assumption '" + kind + "'");
}

nlohmann::json effect_to_json(const distcore::EffectRow& e)
{
    nlohmann::json j{{"est", e.estimate}, {"se", e.se}, {"ci", {e.ci_lower, e.ci_upper}}};
    if (e.se_log)
        j["se_log"] = *e.se_log;
    return j;
}

distcore::EffectRow effect_from_json(const nlohmann::json& j, const std::string& name)
{
    distcore::EffectRow e;
    e.name = name;
    e.estimate = j.at("est").get<double>();
    e.se = j.at("se").get<double>();
    if (j.contains("se_log"))
        e.se_log = j.at("se_log").get<double>();
    e.ci_lower = j.at("ci").at(0).get<double>();
    e.ci_upper = j.at("ci").at(1).get<double>();
    return e;
}

} // namespace

nlohmann::json comparison_to_json(const distcore::ComparisonResult& result)
{
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : result.groups)
        groups.push_back({{"label", g.label},
                          {"n", g.n},
                          {"mean", g.mean},
                          {"sd", g.sd},
                          {"prop", g.dist_prop}});

    nlohmann::json j;
    j["cut_point"] = result.cut_point;
    j["tail"] = result.tail == distcore::Tail::upper ? "upper" : "lower";
    j["assumption"] = assumption_to_json(result.assumption);
    if (result.shape)
        j["alpha"] = *result.shape;
    j["groups"] = groups;
    j["effects"] = {{"diff", effect_to_json(result.diff)},
                    {"rr", effect_to_json(result.risk_ratio)},
                    {"or", effect_to_json(result.odds_ratio)}};
    j["level"] = result.level;
    return j;
}

distcore::ComparisonResult comparison_from_json(const nlohmann::json& j)
{
    distcore::ComparisonResult r;
    r.cut_point = j.at("cut_point").get<double>();
    const std::string tail = j.at("tail").get<std::string>();
    r.tail = tail == "upper" ? distcore::Tail::upper : distcore::Tail::lower;
    r.assumption = assumption_from_json(j.at("assumption"));
    if (j.contains("alpha"))
        r.shape = j.at("alpha").get<double>();
    const nlohmann::json& groups = j.at("groups");
    for (int i = 0; i < 2; ++i) {
        r.groups[i].label = groups.at(i).at("label").get<std::string>();
        r.groups[i].n = groups.at(i).at("n").get<long>();
        r.groups[i].mean = groups.at(i).at("mean").get<double>();
        r.groups[i].sd = groups.at(i).at("sd").get<double>();
        r.groups[i].dist_prop = groups.at(i).at("prop").get<double>();
    }
    r.diff = effect_from_json(j.at("effects").at("diff"), "diff");
    r.risk_ratio = effect_from_json(j.at("effects").at("rr"), "rr");
    r.odds_ratio = effect_from_json(j.at("effects").at("or"), "or");
    r.level = j.at("level").get<double>();
    return r;
}

nlohmann::json ttest_to_json(const distcore::TTestResult& t)
{
    return {{"variant", t.variant == distcore::TTestVariant::welch ? "welch" : "pooled"},
            {"t", t.t},
            {"df", t.df},
            {"p_two_sided", t.p_two_sided},
            {"ci", {t.ci_lower, t.ci_upper}},
            {"means", {t.mean_exposed, t.mean_control}},
            {"level", t.level}};
}

regadjust::AdjustedModelSummary adjusted_summary_from_json(const nlohmann::json& j)
{
    regadjust::AdjustedModelSummary s;
    for (const auto& [key, value] : j.at("marginal_means").items())
        s.marginal_means[key] = value.get<double>();
    s.residual_sd = j.at("residual_sd").get<double>();
    s.random_intercept_sd = j.value("random_intercept_sd", 0.0);
    for (const auto& [key, value] : j.at("level_counts").items())
        s.level_counts[key] = value.get<long>();
    s.reference_level = j.at("reference_level").get<std::string>();
    return s;
}

} // namespace distdicho::cli
