#include "ashards/serialize.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstring>

#include "ashards/wire.hpp"

namespace ashards {

namespace {
constexpr char kMagic[4] = {'A', 'S', 'H', 'R'};

std::vector<std::uint64_t> shape_dims(const Shape& shape) {
    switch (shape.kind) {
        case ShapeKind::Scalar: return {};
        case ShapeKind::Vector: return {shape.rows};
        case ShapeKind::Matrix: return {shape.rows, shape.cols};
    }
    raise(ErrorCode::Internal, "shareset: unknown shape kind");
}

const char* shape_name(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Scalar: return "scalar";
        case ShapeKind::Vector: return "vector";
        case ShapeKind::Matrix: return "matrix";
    }
    return "?";
}
} // namespace

std::vector<std::uint8_t> shareset_to_bytes(const ShareSet& set) {
    ByteWriter w;
    w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
    w.u16_be(kShareSetVersion);
    w.u8(static_cast<std::uint8_t>(set.shape.kind));
    for (std::uint64_t d : shape_dims(set.shape)) w.u64_be(d);
    w.u32_be(static_cast<std::uint32_t>(set.shares.size()));
    w.bytes(std::span<const std::uint8_t>(set.params_digest.data(), set.params_digest.size()));
    const std::size_t count = set.shape.element_count();
    for (const auto& arr : set.shares) {
        if (arr.size() != count)
            raise(ErrorCode::InvalidArgument, "shareset: share array does not match shape");
        for (const cplx& v : arr) {
            w.f64_le(v.real());
            w.f64_le(v.imag());
        }
    }
    return w.take();
}

ShareSet shareset_from_bytes(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        raise(ErrorCode::FormatError, "shareset: bad magic");
    std::uint16_t version = r.u16_be();
    if (version != kShareSetVersion)
        raise(ErrorCode::FormatError, "shareset: unsupported version " + std::to_string(version));

    ShareSet set;
    std::uint8_t tag = r.u8();
    if (tag > 2) raise(ErrorCode::FormatError, "shareset: unknown shape tag");
    set.shape.kind = static_cast<ShapeKind>(tag);
    switch (set.shape.kind) {
        case ShapeKind::Scalar: set.shape.rows = set.shape.cols = 1; break;
        case ShapeKind::Vector:
            set.shape.rows = r.u64_be();
            set.shape.cols = 1;
            break;
        case ShapeKind::Matrix:
            set.shape.rows = r.u64_be();
            set.shape.cols = r.u64_be();
            break;
    }
    std::uint32_t n = r.u32_be();
    auto digest = r.bytes(32);
    std::copy(digest.begin(), digest.end(), set.params_digest.begin());

    const std::size_t count = set.shape.element_count();
    if (count > (1ull << 32))
        raise(ErrorCode::FormatError, "shareset: implausible element count");
    set.shares.assign(n, std::vector<cplx>(count));
    for (auto& arr : set.shares)
        for (cplx& v : arr) {
            double re = r.f64_le();
            double im = r.f64_le();
            v = {re, im};
        }
    if (!r.done()) raise(ErrorCode::FormatError, "shareset: trailing bytes");
    return set;
}

std::string shareset_to_json(const ShareSet& set) {
    nlohmann::ordered_json j;
    j["magic"] = "ASHR";
    j["version"] = kShareSetVersion;
    j["shape"] = shape_name(set.shape.kind);
    j["dims"] = shape_dims(set.shape);
    j["n"] = set.shares.size();
    char hex[65];
    for (int i = 0; i < 32; ++i) std::snprintf(hex + 2 * i, 3, "%02x", set.params_digest[i]);
    j["params_digest"] = std::string(hex, 64);
    nlohmann::ordered_json arrays = nlohmann::ordered_json::array();
    for (const auto& arr : set.shares) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const cplx& v : arr) {
            a.push_back(v.real());
            a.push_back(v.imag());
        }
        arrays.push_back(std::move(a));
    }
    j["shares"] = std::move(arrays);
    return j.dump();
}

ShareSet shareset_slice(const ShareSet& set, std::uint32_t server_index) {
    if (server_index < 1 || server_index > set.shares.size())
        raise(ErrorCode::InvalidArgument, "shareset_slice: server index out of range");
    ShareSet slice;
    slice.shape = set.shape;
    slice.params_digest = set.params_digest;
    slice.shares.push_back(set.shares[server_index - 1]);
    return slice;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) raise(ErrorCode::IoError, "cannot open for writing: " + path);
    std::size_t written = bytes.empty() ? 0 : std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (written != bytes.size()) raise(ErrorCode::IoError, "short write: " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) raise(ErrorCode::IoError, "cannot open for reading: " + path);
    std::fseek(f, 0, SEEK_END);
    long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<std::uint8_t> out(size > 0 ? static_cast<std::size_t>(size) : 0);
    std::size_t got = out.empty() ? 0 : std::fread(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (got != out.size()) raise(ErrorCode::IoError, "short read: " + path);
    return out;
}

} // namespace ashards
