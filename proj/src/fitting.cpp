#include "distdicho/fitting.hpp"

#include "distdicho/distributions.hpp"
#include "distdicho/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace distdicho::fitting {

namespace {

void check_summary(const GroupSummary& g, const char* fn)
{
    if (g.n < 2)
        throw std::domain_error(std::string(fn) + ": requires n >= 2 per group");
    if (!(g.sd > 0.0) || std::isnan(g.sd) || std::isinf(g.sd))
        throw std::domain_error(std::string(fn) + ": requires finite sd > 0");
    if (std::isnan(g.mean) || std::isinf(g.mean))
        throw std::domain_error(std::string(fn) + ": requires finite mean");
}

struct TwoGroups {
    std::vector<double> a;
    std::vector<double> b;
};

TwoGroups split_groups(const std::vector<double>& values,
                       const std::vector<std::string>& groups, const char* fn)
{
    if (values.size() != groups.size())
        throw std::invalid_argument(std::string(fn) + ": values and groups differ in length");
    if (values.size() < 10)
        throw std::domain_error(std::string(fn) + ": requires at least 10 observations");

    TwoGroups out;
    const std::string first = groups.front();
    std::string second;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (groups[i] == first) {
            out.a.push_back(values[i]);
        } else {
            if (second.empty())
                second = groups[i];
            else if (groups[i] != second)
                throw std::domain_error(std::string(fn) + ": requires exactly two groups");
            out.b.push_back(values[i]);
        }
    }
    if (out.b.size() < 2 || out.a.size() < 2)
        throw std::domain_error(std::string(fn) + ": requires two groups with n >= 2 each");
    return out;
}

double sample_mean(const std::vector<double>& x)
{
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(const std::vector<double>& x, double mean)
{
    double ss = 0.0;
    for (double v : x) {
        const double d = v - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

} // namespace

double pooled_sd(const GroupSummary& g1, const GroupSummary& g2)
{
    check_summary(g1, "pooled_sd");
    check_summary(g2, "pooled_sd");
    const double n1 = static_cast<double>(g1.n);
    const double n2 = static_cast<double>(g2.n);
    return std::sqrt(((n1 - 1.0) * g1.sd * g1.sd + (n2 - 1.0) * g2.sd * g2.sd)
                     / (n1 + n2 - 2.0));
}

SdPair ratio_pooled_sds(const GroupSummary& exposed, const GroupSummary& control, double ratio)
{
    check_summary(exposed, "ratio_pooled_sds");
    check_summary(control, "ratio_pooled_sds");
    if (!(ratio > 0.0) || std::isnan(ratio) || std::isinf(ratio))
        throw std::domain_error("ratio_pooled_sds: requires ratio > 0");

    const double nt = static_cast<double>(exposed.n);
    const double nc = static_cast<double>(control.n);
    const double var_control = ((nt - 1.0) * exposed.sd * exposed.sd / ratio
                                + (nc - 1.0) * control.sd * control.sd)
        / (nt + nc - 2.0);
    return {std::sqrt(ratio * var_control), std::sqrt(var_control)};
}

double welch_df(const GroupSummary& g1, const GroupSummary& g2)
{
    check_summary(g1, "welch_df");
    check_summary(g2, "welch_df");
    const double v1 = g1.sd * g1.sd / static_cast<double>(g1.n);
    const double v2 = g2.sd * g2.sd / static_cast<double>(g2.n);
    const double num = (v1 + v2) * (v1 + v2);
    return num / (v1 * v1 / (g1.n - 1.0) + v2 * v2 / (g2.n - 1.0));
}

double gamma_moment_shape(double mean, double sd)
{
    if (!(mean > 0.0) || !(sd > 0.0))
        throw std::domain_error("gamma_moment_shape: requires mean, sd > 0");
    const double r = mean / sd;
    return r * r;
}

namespace {

// Joint log-likelihood at shape alpha with group means and the pooled sd
// plugged in (closed-form recentring).
double sn_profile_loglik(const TwoGroups& g, double mean_a, double mean_b, double sd_pooled,
                         double alpha)
{
    using distributions::SkewNormalCentred;
    using distributions::SkewNormalDirect;
    using distributions::sn_centred_to_direct;

    double ll = 0.0;
    for (int which = 0; which < 2; ++which) {
        const std::vector<double>& xs = which == 0 ? g.a : g.b;
        const double mean = which == 0 ? mean_a : mean_b;
        const SkewNormalDirect d = sn_centred_to_direct({mean, sd_pooled, alpha});
        const double log_norm = std::log(2.0 / d.scale);
        for (double x : xs) {
            const double z = (x - d.location) / d.scale;
            ll += log_norm - 0.5 * z * z - 0.91893853320467274178 // ln sqrt(2 pi)
                + specfun::log_normal_cdf(alpha * z);
        }
    }
    return ll;
}

} // namespace

double fit_sn_shape(const std::vector<double>& values, const std::vector<std::string>& groups)
{
    const TwoGroups g = split_groups(values, groups, "fit_sn_shape");
    const double mean_a = sample_mean(g.a);
    const double mean_b = sample_mean(g.b);
    const GroupSummary sa{static_cast<long>(g.a.size()), mean_a, sample_sd(g.a, mean_a)};
    const GroupSummary sb{static_cast<long>(g.b.size()), mean_b, sample_sd(g.b, mean_b)};
    const double sp = pooled_sd(sa, sb);

    // Golden-section search on [-50, 50].
    const double gr = 0.61803398874989484820;
    double lo = -50.0;
    double hi = 50.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = sn_profile_loglik(g, mean_a, mean_b, sp, x1);
    double f2 = sn_profile_loglik(g, mean_a, mean_b, sp, x2);
    int iter = 0;
    while (hi - lo > 1e-6) {
        if (++iter > 200)
            throw convergence_error("fit_sn_shape: did not converge", 0.5 * (lo + hi));
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = sn_profile_loglik(g, mean_a, mean_b, sp, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = sn_profile_loglik(g, mean_a, mean_b, sp, x1);
        }
    }
    return 0.5 * (lo + hi);
}

double fit_gamma_shape(const std::vector<double>& values, const std::vector<std::string>& groups)
{
    for (double v : values) {
        if (std::isnan(v) || v < 0.0)
            throw std::domain_error("fit_gamma_shape: data must be non-negative");
        if (v == 0.0)
            throw std::domain_error(
                "fit_gamma_shape: data contains zeros; gamma fitting requires strictly "
                "positive values (apply a positive shift, e.g. --shift)");
    }
    const TwoGroups g = split_groups(values, groups, "fit_gamma_shape");

    // Profile score: sum_g n_g (ln a - psi(a) - s_g) with
    // s_g = ln(mean_g) - mean(ln x)_g.
    double weighted_s = 0.0;
    double weighted_mom = 0.0;
    double total_n = 0.0;
    for (int which = 0; which < 2; ++which) {
        const std::vector<double>& xs = which == 0 ? g.a : g.b;
        const double n = static_cast<double>(xs.size());
        const double mean = sample_mean(xs);
        double mean_log = 0.0;
        for (double v : xs)
            mean_log += std::log(v);
        mean_log /= n;
        weighted_s += n * (std::log(mean) - mean_log);
        const double sd = sample_sd(xs, mean);
        if (sd > 0.0)
            weighted_mom += n * gamma_moment_shape(mean, sd);
        total_n += n;
    }
    const double s = weighted_s / total_n;
    if (!(s > 0.0))
        throw std::domain_error("fit_gamma_shape: degenerate data (zero log-dispersion)");

    // Newton in u = ln(alpha), kept inside a generous bracket.
    const double u_min = std::log(1e-8);
    const double u_max = std::log(1e12);
    double u = std::clamp(std::log(std::max(weighted_mom / total_n, 1e-8)), u_min, u_max);
    for (int iter = 0; iter < 200; ++iter) {
        const double alpha = std::exp(u);
        const double score = std::log(alpha) - specfun::digamma(alpha) - s;
        const double dscore = 1.0 - alpha * specfun::trigamma(alpha);
        const double step = score / dscore;
        u = std::clamp(u - step, u_min, u_max);
        if (std::fabs(step) < 1e-10)
            return std::exp(u);
    }
    throw convergence_error("fit_gamma_shape: Newton iteration did not converge", std::exp(u));
}

FittedLinearModel ols_fit(const std::vector<std::vector<double>>& columns,
                          const std::vector<std::string>& labels,
                          const std::vector<double>& response)
{
    const std::size_t k = columns.size();
    if (k == 0 || labels.size() != k)
        throw std::invalid_argument("ols_fit: mismatched columns and labels");
    const std::size_t n_total = response.size();
    for (const auto& col : columns)
        if (col.size() != n_total)
            throw std::invalid_argument("ols_fit: ragged design matrix");

    // Listwise deletion of rows with any NaN.
    std::vector<std::size_t> rows;
    rows.reserve(n_total);
    for (std::size_t i = 0; i < n_total; ++i) {
        bool ok = !std::isnan(response[i]);
        for (std::size_t j = 0; ok && j < k; ++j)
            ok = !std::isnan(columns[j][i]);
        if (ok)
            rows.push_back(i);
    }
    const std::size_t n = rows.size();
    if (n < k + 1)
        throw std::domain_error("ols_fit: requires rows >= columns + 1 after deletions");

    // Normal equations.
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    std::vector<double> col_means(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t jj = j; jj < k; ++jj) {
            double s = 0.0;
            for (std::size_t r : rows)
                s += columns[j][r] * columns[jj][r];
            xtx[j][jj] = xtx[jj][j] = s;
        }
        double sy = 0.0;
        double sm = 0.0;
        for (std::size_t r : rows) {
            sy += columns[j][r] * response[r];
            sm += columns[j][r];
        }
        xty[j] = sy;
        col_means[j] = sm / static_cast<double>(n);
    }

    // Cholesky with a relative pivot check; a failing pivot names the column.
    std::vector<std::vector<double>> chol(k, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        double d = xtx[j][j];
        for (std::size_t m = 0; m < j; ++m)
            d -= chol[j][m] * chol[j][m];
        if (!(d > 1e-10 * std::fabs(xtx[j][j])) || xtx[j][j] == 0.0)
            throw std::domain_error("ols_fit: design matrix is rank deficient at column '"
                                    + labels[j] + "'");
        chol[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < k; ++i) {
            double s = xtx[i][j];
            for (std::size_t m = 0; m < j; ++m)
                s -= chol[i][m] * chol[j][m];
            chol[i][j] = s / chol[j][j];
        }
    }

    // Solve L L^T b = X^T y.
    std::vector<double> z(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double s = xty[i];
        for (std::size_t m = 0; m < i; ++m)
            s -= chol[i][m] * z[m];
        z[i] = s / chol[i][i];
    }
    std::vector<double> beta(k, 0.0);
    for (std::size_t irev = k; irev-- > 0;) {
        double s = z[irev];
        for (std::size_t m = irev + 1; m < k; ++m)
            s -= chol[m][irev] * beta[m];
        beta[irev] = s / chol[irev][irev];
    }

    double rss = 0.0;
    for (std::size_t r : rows) {
        double fit = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            fit += beta[j] * columns[j][r];
        const double res = response[r] - fit;
        rss += res * res;
    }

    FittedLinearModel model;
    model.coefficients = std::move(beta);
    model.residual_sd = std::sqrt(rss / static_cast<double>(n - k));
    model.covariate_means = std::move(col_means);
    model.design_labels = labels;
    model.n_used = static_cast<long>(n);
    model.n_dropped = static_cast<long>(n_total - n);
    return model;
}

std::map<std::string, double> marginal_means(const FittedLinearModel& model,
                                             const std::string& group_var)
{
    const std::string prefix = group_var + "=";
    std::map<std::string, double> dummy_coef; // level -> coefficient
    double reference_mean = 0.0;
    bool any_dummy = false;
    for (std::size_t j = 0; j < model.design_labels.size(); ++j) {
        const std::string& label = model.design_labels[j];
        if (label.rfind(prefix, 0) == 0) {
            dummy_coef[label.substr(prefix.size())] = model.coefficients[j];
            any_dummy = true;
        } else {
            reference_mean += model.coefficients[j] * model.covariate_means[j];
        }
    }
    if (!any_dummy)
        throw std::domain_error("marginal_means: unknown group variable '" + group_var + "'");

    if (model.level_counts.empty())
        throw std::domain_error("marginal_means: model carries no level counts for '"
                                + group_var + "'");

    std::map<std::string, double> means;
    for (const auto& [level, count] : model.level_counts) {
        (void)count;
        const auto it = dummy_coef.find(level);
        means[level] = it == dummy_coef.end() ? reference_mean : reference_mean + it->second;
    }
    return means;
}

} // namespace distdicho::fitting
