#include "ashards/accuracy.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

#include "ashards/privacy.hpp"
#include "ashards/sharing.hpp"

namespace ashards {

double condition_number(const std::vector<std::vector<cplx>>& matrix) {
    if (matrix.empty() || matrix[0].empty())
        raise(ErrorCode::InvalidArgument, "condition_number: empty matrix");
    Eigen::MatrixXcd m(matrix.size(), matrix[0].size());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (matrix[i].size() != matrix[0].size())
            raise(ErrorCode::InvalidArgument, "condition_number: ragged matrix");
        for (std::size_t j = 0; j < matrix[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix[i][j];
    }
    if (m.rows() < m.cols())
        raise(ErrorCode::Singular, "condition_number: fewer rows than columns");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= smax * 1e-14)
        raise(ErrorCode::Singular, "condition_number: matrix is rank deficient");
    return smax / smin;
}

AccuracyBound accuracy_bound(double leading_coeff, const ProtocolParams& params,
                             const FloatModel& fm, std::optional<double> kappa) {
    if (leading_coeff < 0.0)
        raise(ErrorCode::InvalidArgument, "accuracy_bound: leading coefficient magnitude must be >= 0");
    double m = params.noise_cap();
    if (params.secret_bound > m)
        raise(ErrorCode::PreconditionFailed,
              "accuracy_bound: requires r <= m (secret bound exceeds the noise cap)");

    AccuracyBound b;
    b.a_d = leading_coeff;
    b.noise_cap = m;
    b.t = params.max_colluders;
    b.degree = params.poly_degree;
    b.precision_bits = fm.precision_bits;
    if (kappa) {
        b.kappa = *kappa;
    } else if (params.default_points) {
        b.kappa = 1.0;
    } else {
        b.kappa = condition_number(
            vandermonde(params.omegas, params.max_colluders + 1, false));
    }
    b.delta_f = leading_coeff * std::sqrt(static_cast<double>(params.max_colluders) + 1.0) *
                std::pow(m, static_cast<double>(params.poly_degree)) * b.kappa *
                std::exp2(-(fm.precision_bits + 1));
    return b;
}

std::vector<TradeoffRow> tradeoff_table(std::span<const double> sigma_grid,
                                        const ProtocolParams& base, double leading_coeff,
                                        const FloatModel& fm) {
    if (sigma_grid.empty()) raise(ErrorCode::InvalidArgument, "tradeoff_table: empty sigma grid");
    std::vector<TradeoffRow> rows;
    rows.reserve(sigma_grid.size());
    for (double sigma : sigma_grid) {
        TradeoffRow row;
        row.sigma_n = sigma;
        try {
            if (!(sigma > 0.0)) raise(ErrorCode::InvalidArgument, "sigma_n must be positive");
            ProtocolParams p = base;
            p.sigma_n = sigma;
            p.validate();
            AccuracyBound acc = accuracy_bound(leading_coeff, p, fm);
            double eta = ds_bound_collusion(p.secret_bound, sigma, p.max_colluders).value;
            row.log10_delta_f = std::log10(acc.delta_f);
            row.log10_eta_s = std::log10(eta);
            if (p.secret_bound > 0.0 && row.log10_delta_f > std::log10(p.secret_bound))
                row.flags = "accuracy-vacuous";
        } catch (const Error& e) {
            row.error = true;
            row.flags = std::string("error:") + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::string tradeoff_csv(const std::vector<TradeoffRow>& rows) {
    std::ostringstream os;
    os << "sigma_n,log10_delta_f,log10_eta_s,flags\n";
    for (const auto& r : rows) {
        os << format_double(r.sigma_n) << ',';
        if (r.error) {
            os << ",," << r.flags << '\n';
        } else {
            os << format_double(r.log10_delta_f) << ',' << format_double(r.log10_eta_s) << ','
               << r.flags << '\n';
        }
    }
    return os.str();
}

std::string tradeoff_json(const std::vector<TradeoffRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["sigma_n"] = r.sigma_n;
        if (!r.error) {
            j["log10_delta_f"] = r.log10_delta_f;
            j["log10_eta_s"] = r.log10_eta_s;
        }
        j["flags"] = r.flags;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

double empirical_error(int trials, std::span<const cplx> poly_coeffs,
                       const ProtocolParams& params, bool zero_noise_hook) {
    if (trials < 1) raise(ErrorCode::InvalidArgument, "empirical_error: need at least one trial");
    if (poly_coeffs.size() != params.poly_degree + 1)
        raise(ErrorCode::InvalidArgument,
              "empirical_error: coefficient count must equal configured degree + 1");

    DecoderWeights weights = decoder_weights(params);
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        RngStream rng = RngStream::for_trial(params.seed, static_cast<std::uint64_t>(trial));
        double s = (2.0 * rng.uniform01() - 1.0) * params.secret_bound;
        cplx secret{s, 0.0};
        auto noise = zero_noise_hook ? zero_noise(params.max_colluders, 1)
                                     : sample_truncated_noise(params, 1, rng);
        ShareSet shares = encode_secret(std::span<const cplx>(&secret, 1), Shape::scalar(), params, noise);
        std::vector<cplx> results(params.n_servers);
        for (std::uint32_t i = 0; i < params.n_servers; ++i)
            results[i] = eval_poly(poly_coeffs, shares.shares[i][0]);
        cplx decoded = decode_constant(results, weights);
        cplx expected = eval_poly(poly_coeffs, secret);
        worst = std::max(worst, std::abs(decoded - expected));
    }
    return worst;
}

} // namespace ashards
