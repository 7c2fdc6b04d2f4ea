#include "distdicho/distcore.hpp"
#include "distdicho/distributions.hpp"
#include "distdicho/fitting.hpp"
#include "distdicho/mc_validate.hpp"
#include "distdicho/regadjust.hpp"
#include "distdicho/render.hpp"
#include "distdicho/specfun.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;

using namespace distdicho;

namespace {

distcore::Tail tail_from_string(const std::string& tail)
{
    if (tail == "lower")
        return distcore::Tail::lower;
    if (tail == "upper")
        return distcore::Tail::upper;
    throw std::invalid_argument("tail must be 'lower' or 'upper'");
}

distcore::VarianceAssumption assumption_from_args(const std::string& kind,
                                                  std::optional<double> ratio)
{
    if (kind == "equal")
        return distcore::VarianceAssumption::equal();
    if (kind == "known_ratio") {
        if (!ratio)
            throw std::invalid_argument("known_ratio requires ratio=");
        return distcore::VarianceAssumption::known_ratio(*ratio);
    }
    if (kind == "unknown_unequal")
        return distcore::VarianceAssumption::unknown_unequal();
    throw std::invalid_argument("assumption must be equal, known_ratio or unknown_unequal");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Distributional estimates for dichotomised continuous outcomes";

    py::class_<fitting::GroupSummary>(m, "GroupSummary")
        .def(py::init<long, double, double>(), py::arg("n"), py::arg("mean"), py::arg("sd"))
        .def_readonly("n", &fitting::GroupSummary::n)
        .def_readonly("mean", &fitting::GroupSummary::mean)
        .def_readonly("sd", &fitting::GroupSummary::sd)
        .def("__repr__", [](const fitting::GroupSummary& g) {
            return "GroupSummary(n=" + std::to_string(g.n) + ", mean=" + std::to_string(g.mean)
                + ", sd=" + std::to_string(g.sd) + ")";
        });

    py::class_<distcore::EffectRow>(m, "EffectRow")
        .def_readonly("name", &distcore::EffectRow::name)
        .def_readonly("estimate", &distcore::EffectRow::estimate)
        .def_readonly("se", &distcore::EffectRow::se)
        .def_readonly("se_log", &distcore::EffectRow::se_log)
        .def_readonly("ci_lower", &distcore::EffectRow::ci_lower)
        .def_readonly("ci_upper", &distcore::EffectRow::ci_upper);

    py::class_<distcore::GroupResult>(m, "GroupResult")
        .def_readonly("label", &distcore::GroupResult::label)
        .def_readonly("n", &distcore::GroupResult::n)
        .def_readonly("mean", &distcore::GroupResult::mean)
        .def_readonly("sd", &distcore::GroupResult::sd)
        .def_readonly("dist_prop", &distcore::GroupResult::dist_prop);

    py::class_<distcore::ComparisonResult>(m, "ComparisonResult")
        .def_readonly("cut_point", &distcore::ComparisonResult::cut_point)
        .def_property_readonly("tail",
                               [](const distcore::ComparisonResult& r) {
                                   return r.tail == distcore::Tail::upper ? "upper" : "lower";
                               })
        .def_readonly("shape", &distcore::ComparisonResult::shape)
        .def_readonly("groups", &distcore::ComparisonResult::groups)
        .def_readonly("diff", &distcore::ComparisonResult::diff)
        .def_readonly("rr", &distcore::ComparisonResult::risk_ratio)
        .def_readonly("odds_ratio", &distcore::ComparisonResult::odds_ratio)
        .def_readonly("level", &distcore::ComparisonResult::level)
        .def("to_json",
             [](const distcore::ComparisonResult& r) {
                 return cli::comparison_to_json(r).dump();
             })
        .def("render", [](const distcore::ComparisonResult& r) {
            return cli::render_comparison_text(r);
        });

    py::class_<distcore::TTestResult>(m, "TTestResult")
        .def_readonly("t", &distcore::TTestResult::t)
        .def_readonly("df", &distcore::TTestResult::df)
        .def_readonly("p_two_sided", &distcore::TTestResult::p_two_sided)
        .def_readonly("ci_lower", &distcore::TTestResult::ci_lower)
        .def_readonly("ci_upper", &distcore::TTestResult::ci_upper);

    m.def(
        "dist_normal",
        [](const fitting::GroupSummary& exposed, const fitting::GroupSummary& control,
           double cp, const std::string& tail, const std::string& assumption,
           std::optional<double> ratio, double level) {
            return distcore::dist_normal(exposed, control, cp, tail_from_string(tail),
                                         assumption_from_args(assumption, ratio), level);
        },
        py::arg("exposed"), py::arg("control"), py::arg("cp"), py::arg("tail") = "lower",
        py::arg("assumption") = "equal", py::arg("ratio") = py::none(),
        py::arg("level") = 0.95);

    m.def(
        "dist_skewnormal",
        [](const fitting::GroupSummary& exposed, const fitting::GroupSummary& control,
           double shape, double cp, const std::string& tail, double level) {
            return distcore::dist_skewnormal(exposed, control, shape, cp,
                                             tail_from_string(tail), level);
        },
        py::arg("exposed"), py::arg("control"), py::arg("shape"), py::arg("cp"),
        py::arg("tail") = "lower", py::arg("level") = 0.95);

    m.def(
        "dist_gamma",
        [](const fitting::GroupSummary& exposed, const fitting::GroupSummary& control,
           double shape, double cp, const std::string& tail, double level) {
            return distcore::dist_gamma(exposed, control, shape, cp, tail_from_string(tail),
                                        level);
        },
        py::arg("exposed"), py::arg("control"), py::arg("shape"), py::arg("cp"),
        py::arg("tail") = "lower", py::arg("level") = 0.95);

    m.def(
        "t_test",
        [](const fitting::GroupSummary& exposed, const fitting::GroupSummary& control,
           const std::string& variant, double level) {
            return distcore::t_test(exposed, control,
                                    variant == "welch" ? distcore::TTestVariant::welch
                                                       : distcore::TTestVariant::pooled,
                                    level);
        },
        py::arg("exposed"), py::arg("control"), py::arg("variant") = "pooled",
        py::arg("level") = 0.95);

    m.def(
        "adjusted_comparisons",
        [](const std::map<std::string, double>& marginal_means, double residual_sd,
           double random_intercept_sd, const std::map<std::string, long>& level_counts,
           const std::string& reference_level, double cp, const std::string& tail,
           double level) {
            regadjust::AdjustedModelSummary s;
            s.marginal_means = marginal_means;
            s.residual_sd = residual_sd;
            s.random_intercept_sd = random_intercept_sd;
            s.level_counts = level_counts;
            s.reference_level = reference_level;
            return regadjust::adjusted_comparisons(s, cp, tail_from_string(tail), level);
        },
        py::arg("marginal_means"), py::arg("residual_sd"), py::arg("random_intercept_sd"),
        py::arg("level_counts"), py::arg("reference_level"), py::arg("cp"),
        py::arg("tail") = "lower", py::arg("level") = 0.95);

    m.def("pooled_sd", &fitting::pooled_sd, py::arg("g1"), py::arg("g2"));
    m.def("welch_df", &fitting::welch_df, py::arg("g1"), py::arg("g2"));
    m.def("fit_sn_shape", &fitting::fit_sn_shape, py::arg("values"), py::arg("groups"));
    m.def("fit_gamma_shape", &fitting::fit_gamma_shape, py::arg("values"), py::arg("groups"));

    m.def("normal_cdf", &specfun::normal_cdf, py::arg("z"));
    m.def("normal_quantile", &specfun::normal_quantile, py::arg("p"));
    m.def("owens_t", &specfun::owens_t, py::arg("h"), py::arg("a"));
    m.def("reg_gamma_lower", &specfun::reg_gamma_lower, py::arg("shape"), py::arg("x"));
    m.def("reg_beta", &specfun::reg_beta, py::arg("a"), py::arg("b"), py::arg("x"));
    m.def(
        "sn_cdf",
        [](double mean, double sd, double shape, double x) {
            return distributions::sn_cdf({mean, sd, shape}, x);
        },
        py::arg("mean"), py::arg("sd"), py::arg("shape"), py::arg("x"));
    m.def(
        "gamma_cdf",
        [](double shape, double mean, double x) {
            return distributions::gamma_cdf({shape, mean}, x);
        },
        py::arg("shape"), py::arg("mean"), py::arg("x"));

    m.def(
        "run_scenario",
        [](const std::string& scenario_json, int jobs) {
            const mc_validate::SimScenario s =
                mc_validate::scenario_from_json_text(scenario_json);
            return mc_validate::report_to_json_text(mc_validate::run_scenario(s, jobs));
        },
        py::arg("scenario_json"), py::arg("jobs") = 1);
}
