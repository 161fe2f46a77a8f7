#include "ashards/params.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstring>
#include <set>

namespace ashards {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void append_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(bits >> s));
}

} // namespace

std::vector<cplx> roots_of_unity(std::uint32_t n) {
    if (n == 0) raise(ErrorCode::InvalidArgument, "roots_of_unity: point count must be positive");
    std::vector<cplx> pts(n);
    for (std::uint32_t i = 1; i <= n; ++i) {
        double angle = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        pts[i - 1] = {std::cos(angle), std::sin(angle)};
    }
    // Exact values at the axis points keep downstream algebra clean.
    for (std::uint32_t i = 1; i <= n; ++i) {
        std::uint64_t q = static_cast<std::uint64_t>(i) * 4;
        if (q % n == 0) {
            switch ((q / n) % 4) {
                case 0: pts[i - 1] = {1.0, 0.0}; break;
                case 1: pts[i - 1] = {0.0, 1.0}; break;
                case 2: pts[i - 1] = {-1.0, 0.0}; break;
                case 3: pts[i - 1] = {0.0, -1.0}; break;
            }
        }
    }
    return pts;
}

ProtocolParams ProtocolParams::create(std::uint32_t n_servers, std::uint32_t max_colluders,
                                      std::uint32_t poly_degree, double sigma_n, double alpha,
                                      double secret_bound, std::uint64_t seed) {
    ProtocolParams p;
    p.n_servers = n_servers;
    p.max_colluders = max_colluders;
    p.poly_degree = poly_degree;
    p.sigma_n = sigma_n;
    p.alpha = alpha;
    p.secret_bound = secret_bound;
    p.seed = seed;
    p.omegas = roots_of_unity(n_servers);
    p.default_points = true;
    p.validate();
    return p;
}

ProtocolParams ProtocolParams::create_with_points(std::uint32_t n_servers, std::uint32_t max_colluders,
                                                  std::uint32_t poly_degree, double sigma_n,
                                                  double alpha, double secret_bound,
                                                  std::uint64_t seed, std::vector<cplx> points) {
    ProtocolParams p;
    p.n_servers = n_servers;
    p.max_colluders = max_colluders;
    p.poly_degree = poly_degree;
    p.sigma_n = sigma_n;
    p.alpha = alpha;
    p.secret_bound = secret_bound;
    p.seed = seed;
    p.omegas = std::move(points);
    p.default_points = false;
    p.validate();
    return p;
}

void ProtocolParams::validate() const {
    if (n_servers < 2) raise(ErrorCode::InvalidArgument, "params: need at least 2 servers");
    if (max_colluders < 1) raise(ErrorCode::InvalidArgument, "params: collusion bound t must be >= 1");
    if (poly_degree < 1) raise(ErrorCode::InvalidArgument, "params: polynomial degree must be >= 1");
    if (!(sigma_n > 0.0)) raise(ErrorCode::InvalidArgument, "params: sigma_n must be positive");
    if (!(alpha > 0.0)) raise(ErrorCode::InvalidArgument, "params: alpha must be positive");
    if (secret_bound < 0.0) raise(ErrorCode::InvalidArgument, "params: secret bound r must be >= 0");
    std::uint64_t needed = static_cast<std::uint64_t>(poly_degree) * max_colluders + 1;
    if (n_servers < needed)
        raise(ErrorCode::InvalidArgument,
              "params: recovery needs n >= degree*t + 1 = " + std::to_string(needed) +
                  " servers, got " + std::to_string(n_servers));
    if (omegas.size() != n_servers)
        raise(ErrorCode::InvalidArgument, "params: evaluation point count must equal n");
    std::set<std::pair<double, double>> seen;
    for (const cplx& w : omegas) {
        if (!seen.insert({w.real(), w.imag()}).second)
            raise(ErrorCode::Singular, "params: repeated evaluation points");
    }
    if (default_points) {
        for (const cplx& w : omegas) {
            if (std::abs(std::abs(w) - 1.0) > 1e-12)
                raise(ErrorCode::Internal, "params: default points left the unit circle");
        }
    }
}

std::array<std::uint8_t, 32> ProtocolParams::digest() const {
    std::vector<std::uint8_t> buf;
    buf.reserve(64 + omegas.size() * 16);
    const char magic[4] = {'A', 'S', 'H', 'P'};
    buf.insert(buf.end(), magic, magic + 4);
    append_u32(buf, n_servers);
    append_u32(buf, max_colluders);
    append_u32(buf, poly_degree);
    append_f64(buf, sigma_n);
    append_f64(buf, alpha);
    append_f64(buf, secret_bound);
    append_u32(buf, static_cast<std::uint32_t>(omegas.size()));
    for (const cplx& w : omegas) {
        append_f64(buf, w.real());
        append_f64(buf, w.imag());
    }
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    EVP_Digest(buf.data(), buf.size(), out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

} // namespace ashards
