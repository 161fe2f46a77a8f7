#include <doctest.h>

#include <cmath>
#include <complex>

#include "ashards/accuracy.hpp"
#include "ashards/sharing.hpp"
#include "oracles.hpp"

using namespace ashards;

namespace {

ProtocolParams make_params(std::uint32_t n, std::uint32_t t, std::uint32_t degree, double sigma,
                           double alpha = 10.0, double r = 255.0, std::uint64_t seed = 7) {
    return ProtocolParams::create(n, t, degree, sigma, alpha, r, seed);
}

double theorem_bound(double a_d, std::uint32_t t, std::uint32_t degree, double noise_cap) {
    return a_d * std::sqrt(double(t) + 1.0) * std::pow(noise_cap, double(degree)) * std::exp2(-53);
}

} // namespace

TEST_SUITE("sharing") {

TEST_CASE("roots of unity hit the axis points exactly") {
    auto pts = roots_of_unity(4);
    CHECK(pts[0] == cplx{0.0, 1.0});
    CHECK(pts[1] == cplx{-1.0, 0.0});
    CHECK(pts[2] == cplx{0.0, -1.0});
    CHECK(pts[3] == cplx{1.0, 0.0});

    CHECK(roots_of_unity(1) == std::vector<cplx>{cplx{1.0, 0.0}});

    // exp(2*pi*i*2/8) = i, checked against an arbitrary-precision evaluation
    // of the angle (value is exactly the quarter turn).
    auto octal = roots_of_unity(8);
    CHECK(std::abs(octal[1] - cplx{0.0, 1.0}) < 1e-15);

    for (std::uint32_t n : {2u, 3u, 5u, 7u, 12u, 33u})
        for (const cplx& w : roots_of_unity(n)) CHECK(std::abs(std::abs(w) - 1.0) < 1e-12);

    CHECK_THROWS_AS(roots_of_unity(0), Error);
}

TEST_CASE("truncated sampling: cap, variance, determinism") {
    ProtocolParams params = make_params(2, 1, 1, 1e3);
    RngStream rng(99);
    auto draws = sample_truncated_noise(params, 100000, rng);

    double cap = params.noise_cap();
    CHECK(cap == doctest::Approx(10.0 * 1e3));
    double sum_sq = 0.0;
    for (const auto& d : draws) {
        REQUIRE(d.coeffs.size() == 1);
        CHECK(std::abs(d.coeffs[0]) <= cap);
        sum_sq += std::norm(d.coeffs[0]);
    }
    // Per-coefficient variance sigma^2/t = 1e6; truncation mass at alpha=10
    // is negligible, so the Monte-Carlo estimate lands within 3%.
    double variance = sum_sq / double(draws.size());
    CHECK(variance == doctest::Approx(1e6).epsilon(0.03));

    RngStream rng_a(1234), rng_b(1234);
    auto a = sample_truncated_noise(params, 64, rng_a);
    auto b = sample_truncated_noise(params, 64, rng_b);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coeffs[0] == b[i].coeffs[0]);
}

TEST_CASE("truncated sampling rejects an impossible cap eventually") {
    // Alpha so small that nearly every candidate is rejected; the guard must
    // fire rather than spin forever. Use a tiny alpha to make retries certain.
    ProtocolParams params = ProtocolParams::create(2, 1, 1, 1.0, 1e-9, 0.0, 3);
    RngStream rng(5);
    CHECK_THROWS_AS(sample_truncated_noise(params, 1, rng), Error);
}

TEST_CASE("encode: zero noise reproduces the secret at every server") {
    ProtocolParams params = make_params(5, 2, 2, 1e4);
    cplx s{1.0, 0.0};
    auto set = encode_secret(std::span<const cplx>(&s, 1), Shape::scalar(), params,
                             zero_noise(2, 1));
    REQUIRE(set.shares.size() == 5);
    for (const auto& arr : set.shares) CHECK(arr[0] == cplx{1.0, 0.0});
}

TEST_CASE("encode: direct substitution with forced coefficients") {
    // s = 0, one masking coefficient n_1 = 1, points (-1, 1): shares are
    // s + omega * n_1 = (-1, 1).
    ProtocolParams params = ProtocolParams::create_with_points(
        2, 1, 1, 1e3, 10.0, 255.0, 7, {cplx{-1.0, 0.0}, cplx{1.0, 0.0}});
    cplx s{0.0, 0.0};
    NoiseDraw forced{{cplx{1.0, 0.0}}};
    auto set = encode_secret(std::span<const cplx>(&s, 1), Shape::scalar(), params,
                             std::span<const NoiseDraw>(&forced, 1));
    CHECK(set.shares[0][0] == cplx{-1.0, 0.0});
    CHECK(set.shares[1][0] == cplx{1.0, 0.0});
}

TEST_CASE("encode flags secrets above the advisory bound") {
    ProtocolParams params = make_params(2, 1, 1, 1e3, 10.0, 1.0);
    cplx s{2.5, 0.0};
    bool exceeded = false;
    encode_secret(std::span<const cplx>(&s, 1), Shape::scalar(), params, zero_noise(1, 1),
                  &exceeded);
    CHECK(exceeded);
    cplx small{0.5, 0.0};
    encode_secret(std::span<const cplx>(&small, 1), Shape::scalar(), params, zero_noise(1, 1),
                  &exceeded);
    CHECK_FALSE(exceeded);
}

TEST_CASE("encode rejects mismatched noise shapes") {
    ProtocolParams params = make_params(3, 1, 2, 1e3);
    std::vector<cplx> values{1.0, 2.0};
    CHECK_THROWS_AS(encode_secret(values, Shape::vector(2), params, zero_noise(1, 1)), Error);
    CHECK_THROWS_AS(encode_secret(values, Shape::vector(2), params, zero_noise(3, 2)), Error);
}

TEST_CASE("decoder weights: uniform for canonical roots") {
    // Square system, numerically inverted oracle.
    ProtocolParams p4 = make_params(4, 3, 1, 1e3);
    auto w4 = decoder_weights(p4); // d = 3
    auto oracle4 = oracles::pinv_first_row(p4.omegas, 4);
    REQUIRE(w4.coeffs.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(w4.coeffs[i] - oracle4[i]) < 1e-12);
        CHECK(std::abs(w4.coeffs[i] - cplx{0.25, 0.0}) < 1e-12);
    }

    // Overdetermined system, least-squares oracle.
    ProtocolParams p5 = make_params(5, 3, 1, 1e3);
    auto w5 = decoder_weights(p5);
    auto oracle5 = oracles::pinv_first_row(p5.omegas, 4);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(w5.coeffs[i] - oracle5[i]) < 1e-12);
        CHECK(std::abs(w5.coeffs[i] - cplx{0.2, 0.0}) < 1e-12);
    }
}

TEST_CASE("decoder weights: custom points go through the pseudo-inverse") {
    ProtocolParams params = ProtocolParams::create_with_points(
        2, 1, 1, 1e3, 10.0, 255.0, 7, {cplx{-1.0, 0.0}, cplx{1.0, 0.0}});
    auto w = decoder_weights(params);
    // Inverting [[1,-1],[1,1]] by hand gives first row (1/2, 1/2).
    CHECK(std::abs(w.coeffs[0] - cplx{0.5, 0.0}) < 1e-12);
    CHECK(std::abs(w.coeffs[1] - cplx{0.5, 0.0}) < 1e-12);
}

TEST_CASE("decoder weights invariants and errors") {
    // First-row-of-pseudo-inverse property: weights * B = (1, 0, ..., 0).
    for (std::uint32_t n : {4u, 7u, 16u}) {
        ProtocolParams params = make_params(n, 1, 2, 1e3); // d = 2
        auto w = decoder_weights(params);
        auto b = oracles::vandermonde(params.omegas, 3);
        for (int col = 0; col < 3; ++col) {
            cplx acc = 0.0;
            for (std::uint32_t i = 0; i < n; ++i) acc += w.coeffs[i] * b(i, col);
            CHECK(std::abs(acc - (col == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0})) < 1e-10);
        }
    }

    ProtocolParams params = make_params(4, 1, 3, 1e3);
    CHECK_THROWS_AS(decoder_weights(params, 4), Error); // needs 5 servers

    CHECK_THROWS_AS(ProtocolParams::create_with_points(3, 1, 1, 1e3, 10.0, 255.0, 7,
                                                       {cplx{1.0, 0.0}, cplx{1.0, 0.0},
                                                        cplx{-1.0, 0.0}}),
                    Error); // repeated points
}

TEST_CASE("decode: averaging a constant and length checks") {
    ProtocolParams params = make_params(4, 1, 3, 1e3);
    auto w = decoder_weights(params);
    std::vector<cplx> z(4, cplx{3.25, 0.0});
    CHECK(decode_constant(z, w) == cplx{3.25, 0.0});

    std::vector<cplx> short_z(3, cplx{1.0, 0.0});
    CHECK_THROWS_AS(decode_constant(short_z, w), Error);
}

TEST_CASE("round trip: identity polynomial within the worst-case bound") {
    // f(x) = x, s = 7.5, sigma = 1e5, alpha = 10, n = 2, t = 1.
    ProtocolParams params = make_params(2, 1, 1, 1e5);
    RngStream rng(params.seed);
    auto set = share_scalar(cplx{7.5, 0.0}, params, rng);
    auto w = decoder_weights(params);
    std::vector<cplx> results{set.shares[0][0], set.shares[1][0]};
    DecodedReal d = decode_real(results, w);
    double bound = theorem_bound(1.0, 1, 1, params.noise_cap());
    CHECK(bound == doctest::Approx(1.5700924586e-10).epsilon(1e-9));
    CHECK(std::abs(d.value - 7.5) <= 1.6e-10);
    CHECK(d.imag_residue <= bound);
}

TEST_CASE("round trip: squaring within the degree-2 bound") {
    ProtocolParams params = make_params(3, 1, 2, 1e3);
    RngStream rng(11);
    auto set = share_scalar(cplx{2.0, 0.0}, params, rng);
    auto w = decoder_weights(params);
    std::vector<cplx> results(3);
    std::vector<cplx> coeffs{cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    for (int i = 0; i < 3; ++i) results[i] = eval_poly(coeffs, set.shares[i][0]);
    DecodedReal d = decode_real(results, w);
    double bound = theorem_bound(1.0, 1, 2, params.noise_cap());
    CHECK(bound == doctest::Approx(1.570092459e-8).epsilon(1e-9));
    CHECK(std::abs(d.value - 4.0) <= bound);
    CHECK(d.imag_residue <= bound);
}

TEST_CASE("property: round trip stays inside the bound across configurations") {
    struct Config {
        std::uint32_t n, t, degree;
        double sigma;
    };
    for (const Config& c : {Config{2, 1, 1, 1e5}, Config{4, 1, 3, 1e3}, Config{5, 2, 2, 1e4},
                            Config{7, 3, 2, 1e3}, Config{9, 2, 3, 1e2}}) {
        ProtocolParams params = make_params(c.n, c.t, c.degree, c.sigma, 10.0, 100.0, 17);
        auto w = decoder_weights(params);
        std::vector<cplx> coeffs(c.degree + 1, cplx{0.0, 0.0});
        coeffs[c.degree] = 1.0;
        coeffs[0] = 0.5;
        double bound = theorem_bound(1.0, c.t, c.degree, params.noise_cap());

        for (int trial = 0; trial < 1000; ++trial) {
            RngStream rng = RngStream::for_trial(params.seed, std::uint64_t(trial));
            double s = (2.0 * rng.uniform01() - 1.0) * params.secret_bound;
            cplx secret{s, 0.0};
            auto noise = sample_truncated_noise(params, 1, rng);
            auto set = encode_secret(std::span<const cplx>(&secret, 1), Shape::scalar(), params,
                                     noise);
            std::vector<cplx> results(c.n);
            for (std::uint32_t i = 0; i < c.n; ++i) results[i] = eval_poly(coeffs, set.shares[i][0]);
            DecodedReal d = decode_real(results, w);
            cplx expected = eval_poly(coeffs, secret);
            REQUIRE(std::abs(d.value - expected.real()) <= bound);
            REQUIRE(d.imag_residue <= bound);
        }
    }
}

TEST_CASE("property: interpolation identity on small integer instances") {
    // Integer secrets and integer forced noise; the decoded constant term
    // must agree with direct Lagrange interpolation of the share values.
    RngStream rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint32_t t = 1 + rng.next_u64() % 2;
        std::uint32_t degree = 1 + rng.next_u64() % 2;
        std::uint32_t n = degree * t + 1 + rng.next_u64() % 2;
        if (n > 5) n = 5;
        if (n < degree * t + 1) n = degree * t + 1;
        ProtocolParams params = make_params(n, t, degree, 10.0, 10.0, 16.0, 1);

        cplx secret{double(int(rng.next_u64() % 9) - 4), 0.0};
        NoiseDraw noise;
        for (std::uint32_t j = 0; j < t; ++j)
            noise.coeffs.push_back(cplx{double(int(rng.next_u64() % 7) - 3), 0.0});
        auto set = encode_secret(std::span<const cplx>(&secret, 1), Shape::scalar(), params,
                                 std::span<const NoiseDraw>(&noise, 1));

        std::vector<cplx> coeffs(degree + 1, cplx{0.0, 0.0});
        coeffs[degree] = 1.0;
        std::vector<cplx> values(n);
        for (std::uint32_t i = 0; i < n; ++i) values[i] = eval_poly(coeffs, set.shares[i][0]);

        auto w = decoder_weights(params);
        cplx via_decoder = decode_constant(values, w);
        // The decoder uses the first n points; Lagrange needs exactly d+1.
        std::vector<cplx> pts(params.omegas.begin(), params.omegas.begin() + degree * t + 1);
        std::vector<cplx> vals(values.begin(), values.begin() + degree * t + 1);
        cplx via_lagrange = oracles::lagrange_at_zero(pts, vals);
        cplx truth = eval_poly(coeffs, secret);

        REQUIRE(std::abs(via_decoder - truth) < 1e-9);
        REQUIRE(std::abs(via_lagrange - truth) < 1e-9);
        REQUIRE(std::abs(via_decoder - via_lagrange) < 1e-9);
    }
}

TEST_CASE("determinism: identical seeds give identical share sets") {
    ProtocolParams params = make_params(4, 1, 3, 1e4);
    std::vector<double> values{1.0, -2.0, 3.0, 4.5, 0.25, -0.125};
    RngStream rng_a(params.seed), rng_b(params.seed);
    auto a = share_values(values, Shape::matrix(2, 3), params, rng_a);
    auto b = share_values(values, Shape::matrix(2, 3), params, rng_b);
    REQUIRE(a.shares.size() == b.shares.size());
    for (std::size_t i = 0; i < a.shares.size(); ++i)
        for (std::size_t e = 0; e < a.shares[i].size(); ++e) CHECK(a.shares[i][e] == b.shares[i][e]);
    CHECK(a.params_digest == b.params_digest);
}

TEST_CASE("vector encoding uses independent noise per element") {
    ProtocolParams params = make_params(2, 1, 1, 1e3);
    RngStream rng(5);
    std::vector<double> values{0.0, 0.0, 0.0, 0.0};
    auto set = share_values(values, Shape::vector(4), params, rng);
    // With zero secrets the shares are omega * n_e; all draws distinct.
    for (std::size_t e = 0; e + 1 < 4; ++e)
        CHECK(set.shares[0][e] != set.shares[0][e + 1]);
}

} // TEST_SUITE
