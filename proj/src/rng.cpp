#include "ashards/rng.hpp"

#include <cmath>

namespace ashards {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

cplx RngStream::complex_gaussian(double variance) {
    // Box-Muller; u1 in (0,1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(variance / 2.0);
    return {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
}

double RngStream::gaussian() {
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

} // namespace ashards
