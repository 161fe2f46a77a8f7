#include "ashards/learning.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace ashards {

// ---------------------------------------------------------------------------
// IDX files

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::vector<std::uint8_t> read_maybe_gz(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) raise(ErrorCode::IoError, "cannot open: " + path);
    std::vector<std::uint8_t> out;
    std::uint8_t buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.insert(out.end(), buf, buf + n);
    bool bad = n < 0;
    gzclose(f);
    if (bad) raise(ErrorCode::IoError, "decompression failed: " + path);
    return out;
}

std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

} // namespace

RawDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
    RawDataset data;

    std::vector<std::uint8_t> img = read_maybe_gz(images_path);
    if (img.size() < 16) raise(ErrorCode::FormatError, "images file too short for an IDX header");
    std::uint32_t magic = be32(img.data());
    if (magic != kImagesMagic)
        raise(ErrorCode::FormatError,
              "images magic mismatch: expected 0x00000803, got 0x" + [&] {
                  char b[16];
                  std::snprintf(b, sizeof b, "%08x", magic);
                  return std::string(b);
              }());
    data.count = be32(img.data() + 4);
    data.rows = be32(img.data() + 8);
    data.cols = be32(img.data() + 12);
    std::size_t expected = 16 + std::size_t(data.count) * data.rows * data.cols;
    if (img.size() != expected)
        raise(ErrorCode::FormatError,
              "images payload truncated: expected " + std::to_string(expected) + " bytes, have " +
                  std::to_string(img.size()));
    data.images.assign(img.begin() + 16, img.end());

    std::vector<std::uint8_t> lab = read_maybe_gz(labels_path);
    if (lab.size() < 8) raise(ErrorCode::FormatError, "labels file too short for an IDX header");
    std::uint32_t lmagic = be32(lab.data());
    if (lmagic != kLabelsMagic)
        raise(ErrorCode::FormatError, "labels magic mismatch: expected 0x00000801");
    std::uint32_t lcount = be32(lab.data() + 4);
    if (lab.size() != 8 + std::size_t(lcount))
        raise(ErrorCode::FormatError,
              "labels payload truncated: expected " + std::to_string(8 + std::size_t(lcount)) +
                  " bytes, have " + std::to_string(lab.size()));
    if (lcount != data.count)
        raise(ErrorCode::FormatError, "image count " + std::to_string(data.count) +
                                          " does not match label count " + std::to_string(lcount));
    data.labels.assign(lab.begin() + 8, lab.end());
    return data;
}

void write_idx_images(const std::string& path, const RawDataset& data) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + data.images.size());
    put_be32(out, kImagesMagic);
    put_be32(out, data.count);
    put_be32(out, data.rows);
    put_be32(out, data.cols);
    out.insert(out.end(), data.images.begin(), data.images.end());
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) raise(ErrorCode::IoError, "cannot open for writing: " + path);
    std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
}

void write_idx_labels(const std::string& path, const RawDataset& data) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + data.labels.size());
    put_be32(out, kLabelsMagic);
    put_be32(out, data.count);
    out.insert(out.end(), data.labels.begin(), data.labels.end());
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) raise(ErrorCode::IoError, "cannot open for writing: " + path);
    std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
}

// ---------------------------------------------------------------------------
// Class filtering

Dataset filter_binary(const RawDataset& raw, int class_a, int class_b,
                      std::optional<std::size_t> per_class, std::uint64_t seed,
                      double feature_scale) {
    if (raw.labels.size() != raw.count)
        raise(ErrorCode::InvalidArgument, "filter_binary: label count mismatch");
    if (class_a == class_b) raise(ErrorCode::InvalidArgument, "filter_binary: classes must differ");

    std::vector<std::uint32_t> idx_a, idx_b;
    for (std::uint32_t i = 0; i < raw.count; ++i) {
        if (raw.labels[i] == class_a) idx_a.push_back(i);
        else if (raw.labels[i] == class_b) idx_b.push_back(i);
    }
    if (idx_a.empty())
        raise(ErrorCode::InvalidArgument, "filter_binary: class " + std::to_string(class_a) + " is absent");
    if (idx_b.empty())
        raise(ErrorCode::InvalidArgument, "filter_binary: class " + std::to_string(class_b) + " is absent");

    RngStream rng(seed);
    auto shuffle = [&rng](std::vector<std::uint32_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.next_u64() % i]);
    };

    if (per_class) {
        if (*per_class > idx_a.size() || *per_class > idx_b.size())
            raise(ErrorCode::InvalidArgument, "filter_binary: not enough samples for the requested subsample");
        shuffle(idx_a);
        shuffle(idx_b);
        idx_a.resize(*per_class);
        idx_b.resize(*per_class);
    }

    std::vector<std::pair<std::uint32_t, std::uint8_t>> order;
    order.reserve(idx_a.size() + idx_b.size());
    for (std::uint32_t i : idx_a) order.push_back({i, 1});
    for (std::uint32_t i : idx_b) order.push_back({i, 0});
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_u64() % i]);

    Dataset out;
    out.sample_count = order.size();
    out.feature_count = std::size_t(raw.rows) * raw.cols;
    out.class_a = class_a;
    out.class_b = class_b;
    out.feature_scale = feature_scale;
    out.features.resize(out.sample_count * out.feature_count);
    out.labels.resize(out.sample_count);
    for (std::size_t s = 0; s < order.size(); ++s) {
        const std::uint8_t* src = raw.images.data() + std::size_t(order[s].first) * out.feature_count;
        double* dst = out.features.data() + s * out.feature_count;
        for (std::size_t j = 0; j < out.feature_count; ++j) dst[j] = src[j] * feature_scale;
        out.labels[s] = order[s].second;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Update pieces shared by the trainers

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// X^T (1 - 2 l), the label part of the rewritten update.
std::vector<double> label_term(const Dataset& data) {
    std::vector<double> base(data.feature_count, 0.0);
    for (std::size_t a = 0; a < data.sample_count; ++a) {
        const double* row = data.features.data() + a * data.feature_count;
        double c = 1.0 - 2.0 * double(data.labels[a]);
        for (std::size_t j = 0; j < data.feature_count; ++j) base[j] += row[j] * c;
    }
    return base;
}

// u = X^T (X w) through the same complex kernel the workers run, so the
// zero-noise distributed path reproduces this value-for-value.
std::vector<double> plaintext_u(const Dataset& data, const std::vector<double>& w) {
    std::vector<cplx> xc(data.features.size());
    for (std::size_t i = 0; i < xc.size(); ++i) xc[i] = data.features[i];
    std::vector<cplx> wc(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) wc[i] = w[i];
    std::vector<cplx> z(w.size());
    lr_product(xc.data(), data.sample_count, data.feature_count, wc.data(), z.data());
    std::vector<double> u(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) u[i] = z[i].real();
    return u;
}

} // namespace

double logistic_loss(const std::vector<double>& weights, const Dataset& data) {
    double loss = 0.0;
    for (std::size_t a = 0; a < data.sample_count; ++a) {
        const double* row = data.features.data() + a * data.feature_count;
        double x = 0.0;
        for (std::size_t j = 0; j < data.feature_count; ++j) x += row[j] * weights[j];
        double l = double(data.labels[a]);
        loss += std::max(x, 0.0) - x * l + std::log1p(std::exp(-std::abs(x)));
    }
    return loss / double(data.sample_count);
}

double evaluate_weights(const std::vector<double>& weights, const Dataset& test) {
    if (weights.size() != test.feature_count)
        raise(ErrorCode::InvalidArgument, "evaluate: weight and feature dimensions differ");
    std::size_t correct = 0;
    for (std::size_t a = 0; a < test.sample_count; ++a) {
        const double* row = test.features.data() + a * test.feature_count;
        double x = 0.0;
        for (std::size_t j = 0; j < test.feature_count; ++j) x += row[j] * weights[j];
        int predicted = x > 0.0 ? 1 : 0;
        correct += (predicted == test.labels[a]);
    }
    return double(correct) / double(test.sample_count);
}

double evaluate(const ModelState& model, const Dataset& test) {
    return evaluate_weights(model.weights, test);
}

// ---------------------------------------------------------------------------
// Centralized trainer

ModelState train_centralized(const Dataset& data, const TrainingConfig& cfg) {
    if (!(cfg.beta > 0.0)) raise(ErrorCode::InvalidArgument, "train: beta must be positive");
    const std::size_t m = data.sample_count;
    const std::size_t d = data.feature_count;

    ModelState model;
    model.weights.assign(d, 0.0);
    std::vector<double> base = label_term(data);

    for (std::uint32_t it = 0; it < cfg.iterations; ++it) {
        if (cfg.sigmoid_mode == SigmoidMode::Degree1) {
            std::vector<double> u = plaintext_u(data, model.weights);
            double scale = cfg.beta / (2.0 * double(m));
            for (std::size_t j = 0; j < d; ++j)
                model.weights[j] -= scale * (0.5 * u[j] + base[j]);
        } else {
            // w <- w - (beta/m) X^T (g(Xw) - l)
            std::vector<double> grad(d, 0.0);
            for (std::size_t a = 0; a < m; ++a) {
                const double* row = data.features.data() + a * d;
                double x = 0.0;
                for (std::size_t j = 0; j < d; ++j) x += row[j] * model.weights[j];
                double err = stable_sigmoid(x) - double(data.labels[a]);
                for (std::size_t j = 0; j < d; ++j) grad[j] += row[j] * err;
            }
            double scale = cfg.beta / double(m);
            for (std::size_t j = 0; j < d; ++j) model.weights[j] -= scale * grad[j];
        }
        model.iteration = it + 1;
        model.history.push_back(model.weights);
        IterationStats st;
        st.train_loss = logistic_loss(model.weights, data);
        model.stats.push_back(st);
    }
    return model;
}

// ---------------------------------------------------------------------------
// Distributed analog trainer

ModelState train_analog(const Dataset& data, const TrainingConfig& cfg, Transport* transport,
                        Transcript* transcript_out) {
    const ProtocolParams& params = cfg.params;
    if (params.poly_degree != 3)
        raise(ErrorCode::InvalidArgument,
              "train_analog: the per-iteration product has share degree 3t; configure degree 3");
    if (params.n_servers < 3 * params.max_colluders + 1)
        raise(ErrorCode::PreconditionFailed,
              "train_analog: need n >= 3t + 1 servers for the iteration product");
    if (!(cfg.beta > 0.0)) raise(ErrorCode::InvalidArgument, "train: beta must be positive");

    const std::size_t m = data.sample_count;
    const std::size_t d = data.feature_count;
    const std::uint32_t t = params.max_colluders;

    std::unique_ptr<InProcessTransport> owned;
    if (!transport) {
        owned = std::make_unique<InProcessTransport>(params.n_servers);
        transport = owned.get();
    }
    MasterSession session(params, *transport, RunOptions{});
    RngStream rng(params.seed);

    // The feature matrix is shared once; every iteration reuses the same
    // installed slices.
    std::vector<cplx> leading_gram; // N_t^T N_t, for the drift diagnostic
    {
        std::vector<cplx> lifted(m * d);
        for (std::size_t i = 0; i < lifted.size(); ++i) lifted[i] = data.features[i];
        std::vector<NoiseDraw> noise = cfg.zero_noise ? zero_noise(t, m * d)
                                                      : sample_truncated_noise(params, m * d, rng);
        ShareSet xs = encode_secret(lifted, Shape::matrix(m, d), params, noise);
        if (cfg.drift_check) {
            // Gram matrix of the top-degree masking matrix.
            std::vector<cplx> top(m * d);
            for (std::size_t e = 0; e < m * d; ++e) top[e] = noise[e].coeffs[t - 1];
            leading_gram.assign(d * d, cplx{0.0, 0.0});
            for (std::size_t a = 0; a < m; ++a) {
                const cplx* row = top.data() + a * d;
                for (std::size_t i = 0; i < d; ++i) {
                    const cplx ri = row[i];
                    cplx* out = leading_gram.data() + i * d;
                    for (std::size_t j = 0; j < d; ++j) out[j] += ri * row[j];
                }
            }
        }
        session.install_shares(0, xs);
    }
    session.transcript().counts.worker_flops += 0; // products counted per task below

    std::vector<double> base = label_term(data);
    ModelState model;
    model.weights.assign(d, 0.0);

    TaskSpec task;
    task.kind = TaskSpec::Kind::LrIterationProduct;
    task.matrix_slot = 0;
    task.vector_slot = 1;
    task.params_digest = params.digest();

    for (std::uint32_t it = 0; it < cfg.iterations; ++it) {
        std::vector<cplx> wc(d);
        for (std::size_t j = 0; j < d; ++j) wc[j] = model.weights[j];
        std::vector<NoiseDraw> wnoise = cfg.zero_noise ? zero_noise(t, d)
                                                       : sample_truncated_noise(params, d, rng);
        ShareSet ws = encode_secret(wc, Shape::vector(d), params, wnoise);
        session.install_shares(1, ws);

        session.transcript().counts.worker_flops += 8ull * params.n_servers * 2 * m * d;
        double residue = 0.0;
        std::vector<cplx> decoded = session.run_task(task, &residue);
        if (decoded.size() != d)
            raise(ErrorCode::ProtocolFailure, "train_analog: decoded update has the wrong length");

        IterationStats st;
        st.residue_max = residue;
        std::vector<double> u(d);
        double u_norm = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = decoded[j].real();
            u_norm += u[j] * u[j];
        }
        u_norm = std::sqrt(u_norm);
        st.degraded = residue > cfg.residue_warn_scale * std::max(u_norm, 1e-300);

        if (cfg.drift_check) {
            // Leading coefficient of the entry-wise share polynomial is
            // (N_t^T N_t) n_t; its magnitude scales the decode perturbation.
            double lead_max = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                cplx acc{0.0, 0.0};
                const cplx* row = leading_gram.data() + i * d;
                for (std::size_t j = 0; j < d; ++j) acc += row[j] * wnoise[j].coeffs[t - 1];
                lead_max = std::max(lead_max, std::abs(acc));
            }
            st.u_error_bound = lead_max * std::sqrt(double(t) + 1.0) * std::exp2(-53);
            std::vector<double> exact = plaintext_u(data, model.weights);
            double drift = 0.0;
            for (std::size_t j = 0; j < d; ++j) drift = std::max(drift, std::abs(u[j] - exact[j]));
            st.u_drift_max = drift;
        }

        double scale = cfg.beta / (2.0 * double(m));
        for (std::size_t j = 0; j < d; ++j)
            model.weights[j] -= scale * (0.5 * u[j] + base[j]);

        model.iteration = it + 1;
        model.history.push_back(model.weights);
        st.train_loss = logistic_loss(model.weights, data);
        model.stats.push_back(st);
    }

    if (transcript_out) *transcript_out = session.transcript();
    if (owned) owned->shutdown();
    return model;
}

// ---------------------------------------------------------------------------
// Fixed-point baseline over a prime field

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    if (s >= p || s < a) s -= p;
    return s;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + (p - b);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// round(x * 2^frac_bits) mapped to the centered field representation.
std::uint64_t quantize(double x, std::uint32_t frac_bits, std::uint64_t p) {
    double scaled = std::nearbyint(x * std::exp2(double(frac_bits)));
    long long v = static_cast<long long>(scaled);
    if (v >= 0) return static_cast<std::uint64_t>(v) % p;
    std::uint64_t mag = static_cast<std::uint64_t>(-v) % p;
    return mag == 0 ? 0 : p - mag;
}

double dequantize(std::uint64_t v, std::uint32_t scale_bits, std::uint64_t p) {
    std::uint64_t half = (p - 1) / 2;
    double centered = v <= half ? double(v) : -double(p - v);
    return centered * std::exp2(-double(scale_bits));
}

std::uint64_t uniform_field(RngStream& rng, std::uint64_t p) {
    // Rejection from the widest multiple of p below 2^64.
    std::uint64_t limit = ~0ull - (~0ull % p) - 1;
    std::uint64_t v;
    do {
        v = rng.next_u64();
    } while (v > limit);
    return v % p;
}

} // namespace

void FixedPointConfig::validate() const {
    if (!is_prime_u64(field_prime))
        raise(ErrorCode::InvalidArgument, "fixed-point: field modulus must be prime");
    if (field_prime < 3) raise(ErrorCode::InvalidArgument, "fixed-point: modulus too small");
    if (t < 1) raise(ErrorCode::InvalidArgument, "fixed-point: t must be >= 1");
    if (n_servers < 3 * t + 1)
        raise(ErrorCode::PreconditionFailed, "fixed-point: need n >= 3t + 1 servers");
    if (frac_bits > 62) raise(ErrorCode::InvalidArgument, "fixed-point: frac_bits out of range");
}

ModelState train_fixed_point(const Dataset& data, const TrainingConfig& cfg,
                             const FixedPointConfig& fxp) {
    fxp.validate();
    if (!(cfg.beta > 0.0)) raise(ErrorCode::InvalidArgument, "train: beta must be positive");

    const std::size_t m = data.sample_count;
    const std::size_t d = data.feature_count;
    const std::uint64_t p = fxp.field_prime;
    const std::uint32_t n = fxp.n_servers;
    const std::uint32_t t = fxp.t;
    RngStream rng(fxp.seed);

    // Evaluation points 1..n and their power table.
    std::vector<std::vector<std::uint64_t>> powers(n, std::vector<std::uint64_t>(t + 1, 1));
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 1; j <= t; ++j) powers[i][j] = mulmod(powers[i][j - 1], i + 1, p);

    auto share_entry = [&](std::uint64_t value, std::vector<std::uint64_t*> const& outs,
                           std::size_t offset) {
        // Degree-t polynomial with uniform coefficients; share i is p(i+1).
        std::uint64_t coeffs[64];
        for (std::uint32_t j = 0; j < t; ++j) coeffs[j] = uniform_field(rng, p);
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint64_t acc = value;
            for (std::uint32_t j = 0; j < t; ++j)
                acc = addmod(acc, mulmod(coeffs[j], powers[i][j + 1], p), p);
            outs[i][offset] = acc;
        }
    };

    // Share the quantized features once.
    std::vector<std::vector<std::uint64_t>> x_shares(n, std::vector<std::uint64_t>(m * d));
    {
        std::vector<std::uint64_t*> outs(n);
        for (std::uint32_t i = 0; i < n; ++i) outs[i] = x_shares[i].data();
        for (std::size_t e = 0; e < m * d; ++e)
            share_entry(quantize(data.features[e], fxp.frac_bits, p), outs, e);
    }

    // Lagrange reconstruction of the constant term from all n points.
    std::vector<std::uint64_t> lag(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint64_t num = 1, den = 1;
        std::uint64_t xi = i + 1;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::uint64_t xj = j + 1;
            num = mulmod(num, xj, p);
            den = mulmod(den, submod(xj, xi, p), p);
        }
        lag[i] = mulmod(num, invmod(den, p), p);
    }

    std::vector<double> base = label_term(data);
    ModelState model;
    model.weights.assign(d, 0.0);

    std::vector<std::vector<std::uint64_t>> w_shares(n, std::vector<std::uint64_t>(d));
    std::vector<std::uint64_t> v(m), z(d);

    for (std::uint32_t it = 0; it < cfg.iterations; ++it) {
        {
            std::vector<std::uint64_t*> outs(n);
            for (std::uint32_t i = 0; i < n; ++i) outs[i] = w_shares[i].data();
            for (std::size_t j = 0; j < d; ++j)
                share_entry(quantize(model.weights[j], fxp.frac_bits, p), outs, j);
        }

        // Each server computes Xq^T (Xq wq) over the field; the master then
        // interpolates the degree-3t constant term.
        std::vector<std::vector<std::uint64_t>> results(n, std::vector<std::uint64_t>(d, 0));
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::uint64_t* xs = x_shares[i].data();
            const std::uint64_t* wsv = w_shares[i].data();
            for (std::size_t a = 0; a < m; ++a) {
                const std::uint64_t* row = xs + a * d;
                std::uint64_t acc = 0;
                for (std::size_t j = 0; j < d; ++j) acc = addmod(acc, mulmod(row[j], wsv[j], p), p);
                v[a] = acc;
            }
            std::uint64_t* out = results[i].data();
            std::fill(out, out + d, 0);
            for (std::size_t a = 0; a < m; ++a) {
                const std::uint64_t* row = xs + a * d;
                const std::uint64_t va = v[a];
                for (std::size_t b = 0; b < d; ++b) out[b] = addmod(out[b], mulmod(row[b], va, p), p);
            }
        }

        double scale = cfg.beta / (2.0 * double(m));
        for (std::size_t b = 0; b < d; ++b) {
            std::uint64_t acc = 0;
            for (std::uint32_t i = 0; i < n; ++i) acc = addmod(acc, mulmod(lag[i], results[i][b], p), p);
            double u = dequantize(acc, 3 * fxp.frac_bits, p);
            model.weights[b] -= scale * (0.5 * u + base[b]);
        }

        model.iteration = it + 1;
        model.history.push_back(model.weights);
        IterationStats st;
        st.train_loss = logistic_loss(model.weights, data);
        model.stats.push_back(st);
    }
    return model;
}

// ---------------------------------------------------------------------------
// Synthetic digit glyphs

const std::array<std::uint32_t, 10> kMnistTrainDigitCounts = {
    5923, 6742, 5958, 6131, 5842, 5421, 5918, 6265, 5851, 5949};
const std::array<std::uint32_t, 10> kMnistTestDigitCounts = {
    980, 1135, 1032, 1010, 982, 892, 958, 1028, 974, 1009};

namespace {

// Seven-segment layout inside the 28x28 frame.
//      A
//    F   B
//      G
//    E   C
//      D
constexpr std::uint8_t kSegA = 1 << 0;
constexpr std::uint8_t kSegB = 1 << 1;
constexpr std::uint8_t kSegC = 1 << 2;
constexpr std::uint8_t kSegD = 1 << 3;
constexpr std::uint8_t kSegE = 1 << 4;
constexpr std::uint8_t kSegF = 1 << 5;
constexpr std::uint8_t kSegG = 1 << 6;

constexpr std::uint8_t kDigitSegments[10] = {
    kSegA | kSegB | kSegC | kSegD | kSegE | kSegF,         // 0
    kSegB | kSegC,                                         // 1
    kSegA | kSegB | kSegG | kSegE | kSegD,                 // 2
    kSegA | kSegB | kSegG | kSegC | kSegD,                 // 3
    kSegF | kSegG | kSegB | kSegC,                         // 4
    kSegA | kSegF | kSegG | kSegC | kSegD,                 // 5
    kSegA | kSegF | kSegG | kSegE | kSegC | kSegD,         // 6
    kSegA | kSegB | kSegC,                                 // 7
    kSegA | kSegB | kSegC | kSegD | kSegE | kSegF | kSegG, // 8
    kSegA | kSegB | kSegC | kSegD | kSegF | kSegG,         // 9
};

void fill_rect(std::uint8_t* img, int x0, int y0, int x1, int y1, double level, RngStream& rng) {
    for (int y = y0; y <= y1; ++y) {
        if (y < 0 || y >= 28) continue;
        for (int x = x0; x <= x1; ++x) {
            if (x < 0 || x >= 28) continue;
            double v = level + 18.0 * rng.gaussian();
            v = std::clamp(v, 0.0, 255.0);
            std::uint8_t b = static_cast<std::uint8_t>(v);
            if (b > img[y * 28 + x]) img[y * 28 + x] = b;
        }
    }
}

void render_digit(std::uint8_t* img, int digit, RngStream& rng) {
    std::memset(img, 0, 28 * 28);
    int dx = static_cast<int>(rng.next_u64() % 5) - 2;
    int dy = static_cast<int>(rng.next_u64() % 5) - 2;
    int th = 2 + static_cast<int>(rng.next_u64() % 2);
    double level = 170.0 + 80.0 * rng.uniform01();

    const int left = 8 + dx, right = 19 + dx;
    const int top = 4 + dy, mid = 13 + dy, bottom = 22 + dy;
    std::uint8_t segs = kDigitSegments[digit];
    if (segs & kSegA) fill_rect(img, left, top, right, top + th, level, rng);
    if (segs & kSegG) fill_rect(img, left, mid, right, mid + th, level, rng);
    if (segs & kSegD) fill_rect(img, left, bottom - th, right, bottom, level, rng);
    if (segs & kSegF) fill_rect(img, left, top, left + th, mid + th, level, rng);
    if (segs & kSegE) fill_rect(img, left, mid, left + th, bottom, level, rng);
    if (segs & kSegB) fill_rect(img, right - th, top, right, mid + th, level, rng);
    if (segs & kSegC) fill_rect(img, right - th, mid, right, bottom, level, rng);

    // Sparse background speckle.
    for (int i = 0; i < 12; ++i) {
        int x = static_cast<int>(rng.next_u64() % 28);
        int y = static_cast<int>(rng.next_u64() % 28);
        std::uint8_t v = static_cast<std::uint8_t>(rng.next_u64() % 48);
        if (v > img[y * 28 + x]) img[y * 28 + x] = v;
    }
}

} // namespace

RawDataset synthetic_digits(const std::array<std::uint32_t, 10>& per_digit, std::uint64_t seed) {
    RawDataset data;
    data.rows = 28;
    data.cols = 28;
    std::uint64_t total = 0;
    for (std::uint32_t c : per_digit) total += c;
    data.count = static_cast<std::uint32_t>(total);
    data.images.resize(total * 28 * 28);
    data.labels.resize(total);

    std::vector<std::uint8_t> order;
    order.reserve(total);
    for (int digit = 0; digit < 10; ++digit)
        order.insert(order.end(), per_digit[digit], static_cast<std::uint8_t>(digit));
    RngStream shuffle_rng(seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[shuffle_rng.next_u64() % i]);

    for (std::size_t s = 0; s < total; ++s) {
        RngStream rng = RngStream::for_trial(seed, s);
        data.labels[s] = order[s];
        render_digit(data.images.data() + s * 28 * 28, order[s], rng);
    }
    return data;
}

} // namespace ashards
