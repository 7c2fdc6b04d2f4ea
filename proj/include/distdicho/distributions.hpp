#pragma once

// Distribution objects: normal, skew-normal (centred and direct
// parameterizations), gamma (shape/mean), Student-t. Values are immutable
// after construction; all operations are pure.

namespace distdicho::distributions {

struct NormalParams {
    double mean;
    double sd; // > 0
};

/// Skew-normal in centred parameters: population mean, sd and shape alpha.
struct SkewNormalCentred {
    double mean;
    double sd; // > 0
    double shape;
};

/// Skew-normal in direct parameters: location xi, scale w, shape alpha.
struct SkewNormalDirect {
    double location;
    double scale; // > 0
    double shape;
};

/// Gamma with shape alpha and mean mu; rate = shape / mean.
struct GammaParams {
    double shape; // > 0
    double mean;  // > 0

    double rate() const { return shape / mean; }
};

struct StudentT {
    double df; // > 0
};

/// Centred -> direct conversion. mu_z carries the sign of alpha.
SkewNormalDirect sn_centred_to_direct(const SkewNormalCentred& p);

/// Inverse of sn_centred_to_direct.
SkewNormalCentred sn_direct_to_centred(const SkewNormalDirect& p);

/// Skew-normal CDF, Phi(z) - 2 T(z, alpha) with z = (x - location) / scale.
double sn_cdf(const SkewNormalCentred& p, double x);

/// Skew-normal density.
double sn_pdf(const SkewNormalCentred& p, double x);

/// Skew-normal quantile by bisection.
double sn_quantile(const SkewNormalCentred& p, double prob);

double normal_cdf(const NormalParams& p, double x);
double normal_pdf(const NormalParams& p, double x);
double normal_quantile(const NormalParams& p, double prob);

double gamma_cdf(const GammaParams& p, double x);
double gamma_pdf(const GammaParams& p, double x);

/// Gamma quantile by bisection on gamma_cdf (tolerance 1e-10 relative).
double gamma_quantile(const GammaParams& p, double prob);

double t_cdf(const StudentT& dist, double t);
double t_quantile(const StudentT& dist, double prob);

} // namespace distdicho::distributions
