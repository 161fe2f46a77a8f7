#ifndef ASHARDS_SHARING_HPP
#define ASHARDS_SHARING_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ashards/params.hpp"
#include "ashards/rng.hpp"

namespace ashards {

enum class ShapeKind : std::uint8_t { Scalar = 0, Vector = 1, Matrix = 2 };

struct Shape {
    ShapeKind kind = ShapeKind::Scalar;
    std::uint64_t rows = 1;
    std::uint64_t cols = 1;

    static Shape scalar() { return {ShapeKind::Scalar, 1, 1}; }
    static Shape vector(std::uint64_t len) { return {ShapeKind::Vector, len, 1}; }
    static Shape matrix(std::uint64_t r, std::uint64_t c) { return {ShapeKind::Matrix, r, c}; }

    std::size_t element_count() const { return static_cast<std::size_t>(rows) * cols; }
    bool operator==(const Shape&) const = default;
};

// Masking coefficients for one encoded element: t complex values, each capped
// at the params' noise_cap() by rejection resampling.
struct NoiseDraw {
    std::vector<cplx> coeffs;
};

// Per-server shares of one secret (scalar, vector or matrix). shares[i] is the
// array handed to server i+1; all N arrays have identical layout.
struct ShareSet {
    Shape shape;
    std::vector<std::vector<cplx>> shares;
    std::array<std::uint8_t, 32> params_digest{};
};

// First row of the (pseudo-)inverse of the N x (degree+1) evaluation-point
// Vandermonde; multiplying it into the returned results recovers the
// constant term. Uniform 1/N for the canonical roots of unity.
struct DecoderWeights {
    std::vector<cplx> coeffs;
};

// Vandermonde with rows (1, w_i, ..., w_i^cols-1). With canonical = true the
// powers are evaluated as exact unit-circle angles rather than by repeated
// multiplication.
std::vector<std::vector<cplx>> vandermonde(std::span<const cplx> points, std::uint32_t cols,
                                           bool canonical_roots);

// count independent NoiseDraws of t coefficients each; deterministic given the
// stream state and call order. Throws after 10^6 rejected candidates for a
// single coefficient (signals a misconfigured cap).
std::vector<NoiseDraw> sample_truncated_noise(const ProtocolParams& params, std::size_t count,
                                              RngStream& rng);

// All-zero masking coefficients (test hook; shares then equal the secret).
NoiseDraw zero_noise(std::uint32_t t);
std::vector<NoiseDraw> zero_noise(std::uint32_t t, std::size_t count);

// Element-wise encode: share of element e for server i is
// values[e] + sum_j omega_i^j * noise[e].coeffs[j]. noise.size() must equal
// the element count. Secrets above the advisory bound only set a flag.
ShareSet encode_secret(std::span<const cplx> values, const Shape& shape,
                       const ProtocolParams& params, std::span<const NoiseDraw> noise,
                       bool* bound_exceeded = nullptr);

// Convenience wrappers that draw the noise from rng (or zero it out).
ShareSet share_scalar(cplx value, const ProtocolParams& params, RngStream& rng);
ShareSet share_values(std::span<const double> values, const Shape& shape,
                      const ProtocolParams& params, RngStream& rng, bool zero_noise_hook = false);

DecoderWeights decoder_weights(const ProtocolParams& params);
// Weights for an arbitrary share-polynomial degree (e.g. after multiplying
// shares); requires n_servers >= total_degree + 1.
DecoderWeights decoder_weights(const ProtocolParams& params, std::uint32_t total_degree);

cplx decode_constant(std::span<const cplx> results, const DecoderWeights& weights);

struct DecodedReal {
    double value = 0.0;
    double imag_residue = 0.0;
};

// Real part plus imaginary residue magnitude, for real-valued computations.
DecodedReal decode_real(std::span<const cplx> results, const DecoderWeights& weights);

// Horner evaluation; coeffs in ascending order of degree.
cplx eval_poly(std::span<const cplx> coeffs, cplx x);

} // namespace ashards

#endif
