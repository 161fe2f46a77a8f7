#ifndef ASHARDS_RNG_HPP
#define ASHARDS_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace ashards {

using cplx = std::complex<double>;

// Deterministic random stream. All sampling goes through explicit uint64 ->
// double conversions so draws are bit-identical across standard libraries;
// none of the distribution adapters from <random> are used.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Independent stream for a (seed, index) pair, e.g. one per Monte-Carlo
    // trial. Uses a splitmix64 round so neighbouring indices decorrelate.
    static RngStream for_trial(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return RngStream(z ^ (z >> 31));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Zero-mean circular symmetric complex Gaussian with E|z|^2 = variance,
    // i.e. each component is N(0, variance/2). Box-Muller on one uniform pair.
    cplx complex_gaussian(double variance);

    // Standard normal, one component of a Box-Muller pair (the other is
    // discarded; complex draws are the common case here).
    double gaussian();

private:
    std::mt19937_64 gen_;
};

} // namespace ashards

#endif
