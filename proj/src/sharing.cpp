#include "ashards/sharing.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace ashards {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kMaxRejections = 1000000;

Eigen::MatrixXcd to_eigen(const std::vector<std::vector<cplx>>& rows) {
    Eigen::MatrixXcd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

} // namespace

std::vector<std::vector<cplx>> vandermonde(std::span<const cplx> points, std::uint32_t cols,
                                           bool canonical_roots) {
    std::vector<std::vector<cplx>> rows(points.size(), std::vector<cplx>(cols));
    const std::uint64_t n = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (canonical_roots) {
            // points[i] = e^{2*pi*(i+1)/n}; reduce the exponent mod n so high
            // powers do not accumulate multiplication error.
            for (std::uint32_t j = 0; j < cols; ++j) {
                std::uint64_t k = (static_cast<std::uint64_t>(i + 1) * j) % n;
                double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
                rows[i][j] = (k == 0) ? cplx{1.0, 0.0} : cplx{std::cos(angle), std::sin(angle)};
            }
        } else {
            cplx p = 1.0;
            for (std::uint32_t j = 0; j < cols; ++j) {
                rows[i][j] = p;
                p *= points[i];
            }
        }
    }
    return rows;
}

std::vector<NoiseDraw> sample_truncated_noise(const ProtocolParams& params, std::size_t count,
                                              RngStream& rng) {
    const double cap = params.noise_cap();
    const double variance = params.sigma_n * params.sigma_n / params.max_colluders;
    std::vector<NoiseDraw> draws(count);
    for (auto& draw : draws) {
        draw.coeffs.resize(params.max_colluders);
        for (auto& c : draw.coeffs) {
            std::size_t attempts = 0;
            do {
                if (++attempts > kMaxRejections)
                    raise(ErrorCode::InvalidArgument,
                          "sample_truncated_noise: rejection cap exhausted; alpha is too small");
                c = rng.complex_gaussian(variance);
            } while (std::abs(c) > cap);
        }
    }
    return draws;
}

NoiseDraw zero_noise(std::uint32_t t) { return NoiseDraw{std::vector<cplx>(t, cplx{0.0, 0.0})}; }

std::vector<NoiseDraw> zero_noise(std::uint32_t t, std::size_t count) {
    return std::vector<NoiseDraw>(count, zero_noise(t));
}

ShareSet encode_secret(std::span<const cplx> values, const Shape& shape,
                       const ProtocolParams& params, std::span<const NoiseDraw> noise,
                       bool* bound_exceeded) {
    if (values.size() != shape.element_count())
        raise(ErrorCode::InvalidArgument, "encode_secret: value count does not match shape");
    if (noise.size() != values.size())
        raise(ErrorCode::InvalidArgument, "encode_secret: need one noise draw per element");
    for (const NoiseDraw& d : noise) {
        if (d.coeffs.size() != params.max_colluders)
            raise(ErrorCode::InvalidArgument, "encode_secret: noise draw has wrong coefficient count");
    }
    if (bound_exceeded) {
        *bound_exceeded = false;
        for (const cplx& v : values) {
            if (std::abs(v) > params.secret_bound) {
                *bound_exceeded = true;
                break;
            }
        }
    }

    ShareSet set;
    set.shape = shape;
    set.params_digest = params.digest();
    set.shares.assign(params.n_servers, std::vector<cplx>(values.size()));
    for (std::uint32_t i = 0; i < params.n_servers; ++i) {
        const cplx omega = params.omegas[i];
        auto& out = set.shares[i];
        for (std::size_t e = 0; e < values.size(); ++e) {
            cplx acc = values[e];
            cplx p = omega;
            for (std::uint32_t j = 0; j < params.max_colluders; ++j) {
                acc += p * noise[e].coeffs[j];
                p *= omega;
            }
            out[e] = acc;
        }
    }
    return set;
}

ShareSet share_scalar(cplx value, const ProtocolParams& params, RngStream& rng) {
    auto noise = sample_truncated_noise(params, 1, rng);
    return encode_secret(std::span<const cplx>(&value, 1), Shape::scalar(), params, noise);
}

ShareSet share_values(std::span<const double> values, const Shape& shape,
                      const ProtocolParams& params, RngStream& rng, bool zero_noise_hook) {
    std::vector<cplx> lifted(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) lifted[i] = values[i];
    auto noise = zero_noise_hook ? zero_noise(params.max_colluders, values.size())
                                 : sample_truncated_noise(params, values.size(), rng);
    return encode_secret(lifted, shape, params, noise);
}

DecoderWeights decoder_weights(const ProtocolParams& params) {
    return decoder_weights(params, params.decode_degree());
}

DecoderWeights decoder_weights(const ProtocolParams& params, std::uint32_t total_degree) {
    const std::uint32_t n = params.n_servers;
    const std::uint32_t cols = total_degree + 1;
    if (n < cols)
        raise(ErrorCode::InvalidArgument,
              "decoder_weights: interpolation of degree " + std::to_string(total_degree) +
                  " needs " + std::to_string(cols) + " servers, got " + std::to_string(n));

    DecoderWeights w;
    if (params.default_points) {
        // Canonical roots give a Vandermonde with orthogonal equal-norm
        // columns, so the first pseudo-inverse row is exactly uniform.
        w.coeffs.assign(n, cplx{1.0 / static_cast<double>(n), 0.0});
        return w;
    }

    auto rows = vandermonde(params.omegas, cols, false);
    Eigen::MatrixXcd b = to_eigen(rows);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(b);
    if (cod.rank() < static_cast<Eigen::Index>(cols))
        raise(ErrorCode::Singular, "decoder_weights: evaluation points give a rank-deficient system");
    Eigen::MatrixXcd pinv = cod.pseudoInverse();
    w.coeffs.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) w.coeffs[i] = pinv(0, i);
    return w;
}

cplx decode_constant(std::span<const cplx> results, const DecoderWeights& weights) {
    if (results.size() != weights.coeffs.size())
        raise(ErrorCode::InvalidArgument, "decode_constant: need exactly one result per server");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) acc += weights.coeffs[i] * results[i];
    return acc;
}

DecodedReal decode_real(std::span<const cplx> results, const DecoderWeights& weights) {
    cplx v = decode_constant(results, weights);
    return {v.real(), std::abs(v.imag())};
}

cplx eval_poly(std::span<const cplx> coeffs, cplx x) {
    if (coeffs.empty()) return 0.0;
    cplx acc = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

} // namespace ashards
