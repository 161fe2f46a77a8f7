#ifndef ASHARDS_PRIVACY_HPP
#define ASHARDS_PRIVACY_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ashards/params.hpp"

namespace ashards {

// All bounds below are leakage upper bounds: MIS values in bits, DS values
// dimensionless in [0, sqrt(2)]. The exact form is always returned; the
// small-ratio asymptote is reported alongside and flagged when r/sigma_n
// drops below 1e-3.
enum class BoundRegime { Exact, SmallRatioAsymptotic };

struct Bound {
    double value = 0.0;      // exact closed form
    double asymptotic = 0.0; // small-ratio approximation
    BoundRegime regime = BoundRegime::Exact;
};

// log2(1 + r^2/sigma^2): single-observer leakage in bits.
Bound mis_bound_single(double r, double sigma_n);

// log2(1 + r^2 t^2 / sigma^2): leakage to t colluding observers.
Bound mis_bound_collusion(double r, double sigma_n, std::uint32_t t);

// sqrt(1 - exp(-|mu1-mu2|^2 / (4 sigma^2))) for circular complex Gaussians
// of equal variance sigma^2.
double hellinger_gaussian(cplx mu1, cplx mu2, double sigma);

// sqrt(2 (1 - exp(-r^2/sigma^2))): distinguishing bound for one observer.
Bound ds_bound_single(double r, double sigma_n);

// sqrt(2 * eta_c): distinguishing bound from a mutual-information bound.
double ds_from_mis(double eta_c_bits);

// sqrt(2 log2(1 + t^2 r^2 / sigma^2)): composition of the two above.
Bound ds_bound_collusion(double r, double sigma_n, std::uint32_t t);

struct TruncatedBound {
    double value = 0.0;   // reported bound, clamped to sqrt(2) when vacuous
    double raw = 0.0;     // unclamped evaluation
    double w_lower = 0.0; // lower bound on the retained probability mass
    bool degraded = false; // alpha <= 2 r sqrt(t) / sigma: tail term not contracting
    bool vacuous = false;  // bound exceeds the trivial sqrt(2) ceiling
};

// Distinguishing bound when the masking coefficients are truncated at
// m = alpha sigma / sqrt(t): (eta_s + tail) / w with
// tail = (2 exp(-(alpha - 2 r sqrt(t)/sigma)^2 / 2))^t and
// w >= (1 - 2 exp(-alpha^2/2))^t.
TruncatedBound ds_bound_truncated(double r, double sigma_n, std::uint32_t t, double alpha);

// Covariance structure of the masked values seen by a colluding set.
struct CollusionNoiseModel {
    std::vector<std::uint32_t> indices;            // 1-based server indices
    std::vector<std::vector<cplx>> covariance;     // t x t, Hermitian
    double nu_max = 0.0;                           // max eigenvalue of (cov/sigma^2)^-1
};

// Exact covariance E[masked_a * conj(masked_b)] = (sigma^2/t) * sum_{j=1..t}
// (omega_a / omega_b)^j, evaluated by the geometric sum.
CollusionNoiseModel noise_covariance(const ProtocolParams& params,
                                     std::span<const std::uint32_t> indices);

// log2(1 + r^2 * |h|^2 * nu / sigma^2) with h all-ones and nu the largest
// eigenvalue of the inverse normalized covariance. Reduces to the collusion
// closed form for the canonical covariance structure.
double simo_bound_general(const CollusionNoiseModel& model, double r, double sigma_n);

// Exact total variation between the share distributions of secrets -r and r
// for one observer: erf(r / sigma). Independent check that the DS bound
// dominates the true metric.
double tv_oracle_single(double r, double sigma_n);

// Quadrature estimate of the information leaked about a secret uniform on
// [-r, r] through the additive complex Gaussian channel, in bits. Lower
// bound witness for the MIS bound. resolution >= 64 grid points.
double mi_oracle_single(double r, double sigma_n, int resolution);

struct PrivacyReport {
    double eta_c_bits = 0.0;
    double eta_s = 0.0;           // collusion DS bound (MIS composition path)
    double eta_s_truncated = 0.0;
    double w_lower = 0.0;
    std::string regime;           // "exact" | "small-ratio-asymptotic"
    double r = 0.0;
    double sigma_n = 0.0;
    std::uint32_t t = 1;
    double alpha = 0.0;
    // Direct Hellinger-route bound for a single observer; tighter than the
    // composition path at t = 1.
    double eta_s_single = 0.0;
    bool truncation_degraded = false;
    bool truncation_vacuous = false;

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

PrivacyReport make_privacy_report(double r, double sigma_n, std::uint32_t t, double alpha);

} // namespace ashards

#endif
