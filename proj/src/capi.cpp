#include "analog_shards.h"

#include <cstring>
#include <memory>
#include <string>

#include "ashards/accuracy.hpp"
#include "ashards/experiments.hpp"
#include "ashards/learning.hpp"
#include "ashards/privacy.hpp"
#include "ashards/runtime.hpp"
#include "ashards/serialize.hpp"
#include "ashards/sharing.hpp"

using namespace ashards;

struct as_params {
    ProtocolParams inner;
};

struct as_shareset {
    ShareSet inner;
};

namespace {

thread_local std::string g_last_error;

as_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return AS_INVALID_ARGUMENT;
        case ErrorCode::PreconditionFailed: return AS_PRECONDITION_FAILED;
        case ErrorCode::Singular: return AS_SINGULAR;
        case ErrorCode::ProtocolFailure: return AS_PROTOCOL_FAILURE;
        case ErrorCode::IoError: return AS_IO_ERROR;
        case ErrorCode::FormatError: return AS_FORMAT_ERROR;
        case ErrorCode::Internal: return AS_INTERNAL_ERROR;
    }
    return AS_INTERNAL_ERROR;
}

template <typename F>
as_status guarded(F&& fn) {
    try {
        fn();
        return AS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AS_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return AS_INTERNAL_ERROR;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) raise(ErrorCode::InvalidArgument, what);
}

Shape make_shape(as_shape_kind kind, std::uint64_t rows, std::uint64_t cols) {
    switch (kind) {
        case AS_SHAPE_SCALAR: return Shape::scalar();
        case AS_SHAPE_VECTOR: return Shape::vector(rows);
        case AS_SHAPE_MATRIX: return Shape::matrix(rows, cols);
    }
    raise(ErrorCode::InvalidArgument, "unknown shape kind");
}

} // namespace

extern "C" {

const char* as_version(void) { return "1.0.0"; }

const char* as_last_error(void) { return g_last_error.c_str(); }

void as_string_free(char* s) { std::free(s); }
void as_buffer_free(uint8_t* b) { std::free(b); }

as_status as_params_new(uint32_t n, uint32_t t, uint32_t degree, double sigma_n, double alpha,
                        double secret_bound, uint64_t seed, as_params** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        auto p = std::make_unique<as_params>();
        p->inner = ProtocolParams::create(n, t, degree, sigma_n, alpha, secret_bound, seed);
        *out = p.release();
    });
}

void as_params_free(as_params* p) { delete p; }

double as_params_noise_cap(const as_params* p) { return p ? p->inner.noise_cap() : 0.0; }

uint32_t as_params_decode_degree(const as_params* p) { return p ? p->inner.decode_degree() : 0; }

as_status as_params_omega(const as_params* p, uint32_t index, double* re, double* im) {
    return guarded([&] {
        require(p && re && im, "null argument");
        require(index >= 1 && index <= p->inner.n_servers, "server index out of range");
        *re = p->inner.omegas[index - 1].real();
        *im = p->inner.omegas[index - 1].imag();
    });
}

as_status as_params_digest(const as_params* p, uint8_t out[32]) {
    return guarded([&] {
        require(p && out, "null argument");
        auto d = p->inner.digest();
        std::memcpy(out, d.data(), 32);
    });
}

as_status as_share_values(const as_params* p, const double* values, as_shape_kind kind,
                          uint64_t rows, uint64_t cols, uint64_t nonce, int zero_noise,
                          as_shareset** out) {
    return guarded([&] {
        require(p && values && out, "null argument");
        Shape shape = make_shape(kind, rows, cols);
        RngStream rng = RngStream::for_trial(p->inner.seed, nonce);
        auto s = std::make_unique<as_shareset>();
        s->inner = share_values(std::span<const double>(values, shape.element_count()), shape,
                                p->inner, rng, zero_noise != 0);
        *out = s.release();
    });
}

uint32_t as_shareset_count(const as_shareset* s) {
    return s ? static_cast<uint32_t>(s->inner.shares.size()) : 0;
}

uint64_t as_shareset_elements(const as_shareset* s) {
    return s ? s->inner.shape.element_count() : 0;
}

as_status as_shareset_shape(const as_shareset* s, as_shape_kind* kind, uint64_t* rows,
                            uint64_t* cols) {
    return guarded([&] {
        require(s && kind && rows && cols, "null argument");
        *kind = static_cast<as_shape_kind>(s->inner.shape.kind);
        *rows = s->inner.shape.rows;
        *cols = s->inner.shape.cols;
    });
}

as_status as_shareset_data(const as_shareset* s, uint32_t array_index, double* buffer) {
    return guarded([&] {
        require(s && buffer, "null argument");
        require(array_index < s->inner.shares.size(), "array index out of range");
        const auto& arr = s->inner.shares[array_index];
        for (std::size_t e = 0; e < arr.size(); ++e) {
            buffer[2 * e] = arr[e].real();
            buffer[2 * e + 1] = arr[e].imag();
        }
    });
}

as_status as_shareset_to_bytes(const as_shareset* s, uint8_t** bytes, size_t* len) {
    return guarded([&] {
        require(s && bytes && len, "null argument");
        auto buf = shareset_to_bytes(s->inner);
        *bytes = static_cast<uint8_t*>(std::malloc(buf.size()));
        std::memcpy(*bytes, buf.data(), buf.size());
        *len = buf.size();
    });
}

as_status as_shareset_from_bytes(const uint8_t* bytes, size_t len, as_shareset** out) {
    return guarded([&] {
        require(bytes && out, "null argument");
        auto s = std::make_unique<as_shareset>();
        s->inner = shareset_from_bytes(std::span<const uint8_t>(bytes, len));
        *out = s.release();
    });
}

as_status as_shareset_to_json(const as_shareset* s, char** json) {
    return guarded([&] {
        require(s && json, "null argument");
        *json = dup_string(shareset_to_json(s->inner));
    });
}

as_status as_shareset_slice(const as_shareset* s, uint32_t server_index, as_shareset** out) {
    return guarded([&] {
        require(s && out, "null argument");
        auto slice = std::make_unique<as_shareset>();
        slice->inner = shareset_slice(s->inner, server_index);
        *out = slice.release();
    });
}

as_status as_shareset_merge(const as_shareset* const* slices, size_t count, as_shareset** out) {
    return guarded([&] {
        require(slices && out && count > 0, "null argument");
        auto merged = std::make_unique<as_shareset>();
        merged->inner.shape = slices[0]->inner.shape;
        merged->inner.params_digest = slices[0]->inner.params_digest;
        for (size_t i = 0; i < count; ++i) {
            require(slices[i] != nullptr, "null slice");
            const ShareSet& part = slices[i]->inner;
            if (!(part.shape == merged->inner.shape))
                raise(ErrorCode::InvalidArgument, "merge: slice shapes disagree");
            if (part.params_digest != merged->inner.params_digest)
                raise(ErrorCode::InvalidArgument, "merge: slices come from different schemes");
            for (const auto& arr : part.shares) merged->inner.shares.push_back(arr);
        }
        *out = merged.release();
    });
}

void as_shareset_free(as_shareset* s) { delete s; }

as_status as_decode_set(const as_params* p, const as_shareset* results, uint32_t total_degree,
                        double* values, double* max_imag_residue) {
    return guarded([&] {
        require(p && results && values, "null argument");
        const ShareSet& set = results->inner;
        if (set.shares.size() != p->inner.n_servers)
            raise(ErrorCode::InvalidArgument, "decode: need one result array per server");
        DecoderWeights w = decoder_weights(p->inner, total_degree);
        const std::size_t count = set.shape.element_count();
        double residue = 0.0;
        std::vector<cplx> column(set.shares.size());
        for (std::size_t e = 0; e < count; ++e) {
            for (std::size_t i = 0; i < set.shares.size(); ++i) column[i] = set.shares[i][e];
            DecodedReal d = decode_real(column, w);
            values[e] = d.value;
            residue = std::max(residue, d.imag_residue);
        }
        if (max_imag_residue) *max_imag_residue = residue;
    });
}

as_status as_privacy_report_json(double r, double sigma_n, uint32_t t, double alpha, char** json) {
    return guarded([&] {
        require(json != nullptr, "null argument");
        *json = dup_string(make_privacy_report(r, sigma_n, t, alpha).to_json());
    });
}

as_status as_privacy_report_csv(double r, double sigma_n, uint32_t t, double alpha, char** csv) {
    return guarded([&] {
        require(csv != nullptr, "null argument");
        PrivacyReport rep = make_privacy_report(r, sigma_n, t, alpha);
        *csv = dup_string(PrivacyReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
    });
}

namespace {

std::vector<TradeoffRow> tradeoff_rows(const double* sigma_grid, size_t grid_len,
                                       double leading_coeff, uint32_t t, uint32_t degree,
                                       double alpha, double r, int precision_bits) {
    require(sigma_grid != nullptr && grid_len > 0, "empty sigma grid");
    double sigma0 = sigma_grid[0] > 0 ? sigma_grid[0] : 1.0;
    ProtocolParams base =
        ProtocolParams::create(degree * t + 1, t, degree, sigma0, alpha, r, 0);
    FloatModel fm;
    fm.precision_bits = precision_bits;
    return tradeoff_table(std::span<const double>(sigma_grid, grid_len), base, leading_coeff, fm);
}

} // namespace

as_status as_tradeoff_csv(const double* sigma_grid, size_t grid_len, double leading_coeff,
                          uint32_t t, uint32_t degree, double alpha, double r, int precision_bits,
                          char** csv) {
    return guarded([&] {
        require(csv != nullptr, "null argument");
        *csv = dup_string(tradeoff_csv(
            tradeoff_rows(sigma_grid, grid_len, leading_coeff, t, degree, alpha, r, precision_bits)));
    });
}

as_status as_tradeoff_json(const double* sigma_grid, size_t grid_len, double leading_coeff,
                           uint32_t t, uint32_t degree, double alpha, double r, int precision_bits,
                           char** json) {
    return guarded([&] {
        require(json != nullptr, "null argument");
        *json = dup_string(tradeoff_json(
            tradeoff_rows(sigma_grid, grid_len, leading_coeff, t, degree, alpha, r, precision_bits)));
    });
}

as_status as_eval_poly(const as_params* p, const double* coeffs, size_t n_coeffs, double secret,
                       const char* workers, int zero_noise, double* value, double* imag_residue) {
    return guarded([&] {
        require(p && coeffs && n_coeffs > 0 && value, "null argument");
        std::vector<cplx> cc(n_coeffs);
        for (size_t i = 0; i < n_coeffs; ++i) cc[i] = coeffs[i];

        std::unique_ptr<Transport> transport;
        if (workers && *workers) {
            std::vector<std::string> addrs;
            std::string cur;
            for (const char* c = workers; *c; ++c) {
                if (*c == ',') {
                    if (!cur.empty()) addrs.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(*c);
                }
            }
            if (!cur.empty()) addrs.push_back(cur);
            transport = std::make_unique<SocketTransport>(addrs);
        } else {
            transport = std::make_unique<InProcessTransport>(p->inner.n_servers);
        }

        RngStream rng(p->inner.seed);
        ProtocolOutput out = run_protocol(cplx{secret, 0.0}, cc, p->inner, *transport, rng,
                                          zero_noise != 0);
        *value = out.value.real();
        if (imag_residue) *imag_residue = out.imag_residue;
        transport->shutdown();
    });
}

as_status as_worker_serve(const char* listen_addr, uint32_t server_index) {
    return guarded([&] {
        require(listen_addr != nullptr, "null listen address");
        serve_worker(listen_addr, server_index);
    });
}

as_status as_train_run(const char* config, const char* out_prefix, char** report_json) {
    return guarded([&] {
        require(config != nullptr, "null config");
        ExperimentConfig cfg = ExperimentConfig::from_kv(parse_kv_text(config));
        TrainOutcome out = train_run(cfg, out_prefix ? out_prefix : "");
        if (report_json) *report_json = dup_string(out.summary_json);
    });
}

as_status as_compare_run(const char* config, const char* out_prefix, char** report_json) {
    return guarded([&] {
        require(config != nullptr, "null config");
        ExperimentConfig cfg = ExperimentConfig::from_kv(parse_kv_text(config));
        CompareOutcome out = compare_run(cfg, out_prefix ? out_prefix : "");
        if (report_json) *report_json = dup_string(out.report_json);
    });
}

as_status as_write_synthetic_idx(const char* dir, uint64_t seed) {
    return guarded([&] {
        require(dir != nullptr, "null directory");
        std::string base(dir);
        if (!base.empty() && base.back() != '/') base.push_back('/');
        RawDataset train = synthetic_digits(kMnistTrainDigitCounts, seed);
        RawDataset test = synthetic_digits(kMnistTestDigitCounts, seed + 1);
        write_idx_images(base + "train-images.idx", train);
        write_idx_labels(base + "train-labels.idx", train);
        write_idx_images(base + "test-images.idx", test);
        write_idx_labels(base + "test-labels.idx", test);
    });
}

} // extern "C"
