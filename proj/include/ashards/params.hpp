#ifndef ASHARDS_PARAMS_HPP
#define ASHARDS_PARAMS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ashards/error.hpp"

namespace ashards {

using cplx = std::complex<double>;

// The N evaluation points e^{2*pi*i*k/N} for k = 1..N (index N is 1).
std::vector<cplx> roots_of_unity(std::uint32_t n);

// Public scheme parameters shared by master and workers. Immutable once
// created; validation happens at construction.
struct ProtocolParams {
    std::uint32_t n_servers = 0;     // N
    std::uint32_t max_colluders = 0; // t
    std::uint32_t poly_degree = 0;   // degree of the evaluated polynomial
    double sigma_n = 0.0;            // noise standard deviation, secret units
    double alpha = 0.0;              // truncation multiplier
    double secret_bound = 0.0;       // advisory bound r on |secret|
    std::uint64_t seed = 0;
    std::vector<cplx> omegas;        // N evaluation points on the unit circle
    bool default_points = true;      // omegas are the canonical N-th roots

    // n_servers >= poly_degree * max_colluders + 1 is required for recovery.
    static ProtocolParams create(std::uint32_t n_servers, std::uint32_t max_colluders,
                                 std::uint32_t poly_degree, double sigma_n, double alpha,
                                 double secret_bound, std::uint64_t seed);

    // Same, with caller-supplied evaluation points (must be pairwise distinct,
    // size n_servers). Accuracy guarantees then depend on their conditioning.
    static ProtocolParams create_with_points(std::uint32_t n_servers, std::uint32_t max_colluders,
                                             std::uint32_t poly_degree, double sigma_n, double alpha,
                                             double secret_bound, std::uint64_t seed,
                                             std::vector<cplx> points);

    // Per-coefficient magnitude cap m = alpha * sigma_n / sqrt(t).
    double noise_cap() const {
        return alpha * sigma_n / std::sqrt(static_cast<double>(max_colluders));
    }

    // Degree of the share-domain polynomial the decoder interpolates.
    std::uint32_t decode_degree() const { return poly_degree * max_colluders; }

    // SHA-256 over the scheme parameters (seed excluded: sets produced under
    // different seeds stay mutually decodable).
    std::array<std::uint8_t, 32> digest() const;

    void validate() const;
};

// Floating-point model used by the accuracy bounds. precision_bits is the
// mantissa width; exponent_bits is carried for reporting only.
struct FloatModel {
    int precision_bits = 52;
    int exponent_bits = 11;
};

} // namespace ashards

#endif
