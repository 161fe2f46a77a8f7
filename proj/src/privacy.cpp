#include "ashards/privacy.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ashards {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr double kAsymptoticRatio = 1e-3;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// log2(1 + x) accurate for tiny x.
double log2_1p(double x) { return std::log1p(x) / kLn2; }

void check_sigma(double sigma_n) {
    if (!(sigma_n > 0.0)) raise(ErrorCode::InvalidArgument, "bounds: sigma_n must be positive");
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

Bound mis_bound_single(double r, double sigma_n) {
    check_sigma(sigma_n);
    if (r < 0.0) raise(ErrorCode::InvalidArgument, "bounds: r must be >= 0");
    double ratio = r / sigma_n;
    Bound b;
    b.value = log2_1p(ratio * ratio);
    b.asymptotic = ratio * ratio / kLn2;
    b.regime = ratio < kAsymptoticRatio ? BoundRegime::SmallRatioAsymptotic : BoundRegime::Exact;
    return b;
}

Bound mis_bound_collusion(double r, double sigma_n, std::uint32_t t) {
    check_sigma(sigma_n);
    if (r < 0.0) raise(ErrorCode::InvalidArgument, "bounds: r must be >= 0");
    if (t == 0) raise(ErrorCode::InvalidArgument, "bounds: t must be >= 1");
    double ratio = r * t / sigma_n;
    Bound b;
    b.value = log2_1p(ratio * ratio);
    b.asymptotic = ratio * ratio / kLn2;
    b.regime = (r / sigma_n) < kAsymptoticRatio ? BoundRegime::SmallRatioAsymptotic : BoundRegime::Exact;
    return b;
}

double hellinger_gaussian(cplx mu1, cplx mu2, double sigma) {
    if (!(sigma > 0.0)) raise(ErrorCode::InvalidArgument, "hellinger: sigma must be positive");
    double d2 = std::norm(mu1 - mu2);
    return std::sqrt(-std::expm1(-d2 / (4.0 * sigma * sigma)));
}

Bound ds_bound_single(double r, double sigma_n) {
    check_sigma(sigma_n);
    if (r < 0.0) raise(ErrorCode::InvalidArgument, "bounds: r must be >= 0");
    double ratio = r / sigma_n;
    Bound b;
    b.value = std::sqrt(2.0 * -std::expm1(-ratio * ratio));
    b.asymptotic = kSqrt2 * ratio;
    b.regime = ratio < kAsymptoticRatio ? BoundRegime::SmallRatioAsymptotic : BoundRegime::Exact;
    return b;
}

double ds_from_mis(double eta_c_bits) {
    if (eta_c_bits < 0.0) raise(ErrorCode::InvalidArgument, "ds_from_mis: eta_c must be >= 0");
    return std::sqrt(2.0 * eta_c_bits);
}

Bound ds_bound_collusion(double r, double sigma_n, std::uint32_t t) {
    Bound mis = mis_bound_collusion(r, sigma_n, t);
    Bound b;
    b.value = ds_from_mis(mis.value);
    b.asymptotic = std::sqrt(2.0 / kLn2) * t * r / sigma_n;
    b.regime = mis.regime;
    return b;
}

TruncatedBound ds_bound_truncated(double r, double sigma_n, std::uint32_t t, double alpha) {
    check_sigma(sigma_n);
    if (t == 0) raise(ErrorCode::InvalidArgument, "bounds: t must be >= 1");
    if (!(alpha > 0.0)) raise(ErrorCode::InvalidArgument, "bounds: alpha must be positive");

    TruncatedBound out;
    double per_coeff = 1.0 - 2.0 * std::exp(-alpha * alpha / 2.0);
    out.w_lower = per_coeff > 0.0 ? std::pow(per_coeff, static_cast<double>(t)) : 0.0;

    double shift = alpha - 2.0 * r * std::sqrt(static_cast<double>(t)) / sigma_n;
    out.degraded = shift <= 0.0;
    double tail = std::pow(2.0 * std::exp(-0.5 * shift * shift), static_cast<double>(t));

    if (out.w_lower <= 0.0) {
        out.vacuous = true;
        out.raw = std::numeric_limits<double>::infinity();
        out.value = kSqrt2;
        return out;
    }

    double eta_s = ds_bound_collusion(r, sigma_n, t).value;
    out.raw = eta_s / out.w_lower + tail / out.w_lower;
    out.vacuous = out.raw > kSqrt2;
    out.value = out.vacuous ? kSqrt2 : out.raw;
    return out;
}

CollusionNoiseModel noise_covariance(const ProtocolParams& params,
                                     std::span<const std::uint32_t> indices) {
    const std::uint32_t t = params.max_colluders;
    if (indices.empty() || indices.size() != t)
        raise(ErrorCode::InvalidArgument, "noise_covariance: colluding set must have exactly t members");
    std::set<std::uint32_t> seen;
    for (std::uint32_t i : indices) {
        if (i < 1 || i > params.n_servers)
            raise(ErrorCode::InvalidArgument, "noise_covariance: server index out of range");
        if (!seen.insert(i).second)
            raise(ErrorCode::InvalidArgument, "noise_covariance: duplicate server index");
    }

    CollusionNoiseModel model;
    model.indices.assign(indices.begin(), indices.end());
    const double s2 = params.sigma_n * params.sigma_n;
    model.covariance.assign(t, std::vector<cplx>(t));
    for (std::uint32_t a = 0; a < t; ++a) {
        for (std::uint32_t b = 0; b < t; ++b) {
            if (a == b) {
                model.covariance[a][b] = s2;
                continue;
            }
            cplx q = params.omegas[indices[a] - 1] / params.omegas[indices[b] - 1];
            cplx sum = 0.0;
            cplx p = q;
            for (std::uint32_t j = 0; j < t; ++j) {
                sum += p;
                p *= q;
            }
            model.covariance[a][b] = (s2 / static_cast<double>(t)) * sum;
        }
    }

    Eigen::MatrixXcd normalized(t, t);
    for (std::uint32_t a = 0; a < t; ++a)
        for (std::uint32_t b = 0; b < t; ++b) normalized(a, b) = model.covariance[a][b] / s2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(normalized);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig <= 1e-14)
        raise(ErrorCode::Singular, "noise_covariance: covariance is numerically singular");
    model.nu_max = 1.0 / min_eig;
    return model;
}

double simo_bound_general(const CollusionNoiseModel& model, double r, double sigma_n) {
    check_sigma(sigma_n);
    if (r < 0.0) raise(ErrorCode::InvalidArgument, "bounds: r must be >= 0");
    const std::size_t t = model.covariance.size();
    if (t == 0) raise(ErrorCode::InvalidArgument, "simo_bound_general: empty covariance");

    Eigen::MatrixXcd normalized(t, t);
    for (std::size_t a = 0; a < t; ++a)
        for (std::size_t b = 0; b < t; ++b) normalized(a, b) = model.covariance[a][b] / (sigma_n * sigma_n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(normalized);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig <= 1e-14)
        raise(ErrorCode::Singular, "simo_bound_general: covariance is singular");
    double nu = 1.0 / min_eig;
    double h2 = static_cast<double>(t); // all-ones channel vector
    return log2_1p(r * r * h2 * nu / (sigma_n * sigma_n));
}

double tv_oracle_single(double r, double sigma_n) {
    check_sigma(sigma_n);
    if (r < 0.0) raise(ErrorCode::InvalidArgument, "bounds: r must be >= 0");
    return std::erf(r / sigma_n);
}

double mi_oracle_single(double r, double sigma_n, int resolution) {
    check_sigma(sigma_n);
    if (r < 0.0) raise(ErrorCode::InvalidArgument, "bounds: r must be >= 0");
    if (resolution < 64) raise(ErrorCode::InvalidArgument, "mi_oracle: resolution must be >= 64");
    if (r == 0.0) return 0.0;

    // The imaginary output component is independent of the secret, so the
    // problem reduces to the real line: Y = S + Z with Z ~ N(0, sigma^2/2).
    // I(S;Y) = h(Y) - h(Z); h(Y) by trapezoidal quadrature of the mixture
    // density f(y) = (Phi((y+r)/s0) - Phi((y-r)/s0)) / 2r.
    const double s0 = sigma_n / kSqrt2;
    const double lo = -r - 10.0 * s0;
    const double hi = r + 10.0 * s0;
    const int n = resolution;
    const double step = (hi - lo) / n;

    auto std_cdf = [](double x) { return 0.5 * std::erfc(-x / kSqrt2); };
    double h_y = 0.0; // integral of -f log2 f
    for (int i = 0; i <= n; ++i) {
        double y = lo + step * i;
        double f = (std_cdf((y + r) / s0) - std_cdf((y - r) / s0)) / (2.0 * r);
        double g = f > 0.0 ? -f * std::log2(f) : 0.0;
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        h_y += w * g * step;
    }
    const double pi = 3.14159265358979323846;
    double h_z = 0.5 * std::log2(2.0 * pi * 2.718281828459045235 * s0 * s0);
    return std::max(0.0, h_y - h_z);
}

std::string PrivacyReport::to_json() const {
    nlohmann::ordered_json j;
    j["eta_c_bits"] = eta_c_bits;
    j["eta_s"] = eta_s;
    j["eta_s_truncated"] = eta_s_truncated;
    j["w_lower"] = w_lower;
    j["regime"] = regime;
    j["r"] = r;
    j["sigma_n"] = sigma_n;
    j["t"] = t;
    j["alpha"] = alpha;
    j["eta_s_single"] = eta_s_single;
    j["truncation_degraded"] = truncation_degraded;
    j["truncation_vacuous"] = truncation_vacuous;
    return j.dump(2);
}

std::string PrivacyReport::csv_header() {
    return "eta_c_bits,eta_s,eta_s_truncated,w_lower,regime,r,sigma_n,t,alpha";
}

std::string PrivacyReport::to_csv_row() const {
    std::ostringstream os;
    os << format_double(eta_c_bits) << ',' << format_double(eta_s) << ','
       << format_double(eta_s_truncated) << ',' << format_double(w_lower) << ',' << regime << ','
       << format_double(r) << ',' << format_double(sigma_n) << ',' << t << ','
       << format_double(alpha);
    return os.str();
}

PrivacyReport make_privacy_report(double r, double sigma_n, std::uint32_t t, double alpha) {
    PrivacyReport rep;
    Bound mis = mis_bound_collusion(r, sigma_n, t);
    Bound ds = ds_bound_collusion(r, sigma_n, t);
    TruncatedBound trunc = ds_bound_truncated(r, sigma_n, t, alpha);
    rep.eta_c_bits = mis.value;
    rep.eta_s = ds.value;
    rep.eta_s_truncated = trunc.value;
    rep.w_lower = trunc.w_lower;
    rep.regime = mis.regime == BoundRegime::SmallRatioAsymptotic ? "small-ratio-asymptotic" : "exact";
    rep.r = r;
    rep.sigma_n = sigma_n;
    rep.t = t;
    rep.alpha = alpha;
    rep.eta_s_single = ds_bound_single(r, sigma_n).value;
    rep.truncation_degraded = trunc.degraded;
    rep.truncation_vacuous = trunc.vacuous;
    return rep;
}

} // namespace ashards
