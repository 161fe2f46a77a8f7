#include "ashards/wire.hpp"

#include <zlib.h>

#include <cstring>

namespace ashards {

namespace {
constexpr char kMagic[4] = {'A', 'M', 'S', 'G'};

std::uint32_t payload_crc(std::span<const std::uint8_t> payload) {
    return static_cast<std::uint32_t>(
        crc32(0L, payload.empty() ? Z_NULL : payload.data(), static_cast<uInt>(payload.size())));
}
} // namespace

void ByteWriter::u16_be(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32_be(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::u64_be(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::f64_le(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int s = 0; s < 64; s += 8) buf_.push_back(static_cast<std::uint8_t>(bits >> s));
}

void ByteWriter::bytes(std::span<const std::uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteReader::need(std::size_t n) const {
    if (pos_ + n > data_.size())
        raise(ErrorCode::FormatError, "truncated buffer: expected " + std::to_string(n) +
                                          " more bytes, have " + std::to_string(data_.size() - pos_));
}

std::uint8_t ByteReader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint16_t ByteReader::u16_be() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
}

std::uint32_t ByteReader::u32_be() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::u64_be() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
}

double ByteReader::f64_le() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | data_[pos_ + i];
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::vector<std::uint8_t> encode_frame(const WireMessage& msg) {
    ByteWriter w;
    w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
    w.u16_be(kWireVersion);
    w.u8(static_cast<std::uint8_t>(msg.kind));
    w.u64_be(msg.task_id);
    w.u32_be(msg.server_index);
    w.u32_be(static_cast<std::uint32_t>(msg.payload.size()));
    w.bytes(msg.payload);
    w.u32_be(payload_crc(msg.payload));
    return w.take();
}

WireMessage decode_frame(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        raise(ErrorCode::FormatError, "wire: bad magic");
    std::uint16_t version = r.u16_be();
    if (version != kWireVersion)
        raise(ErrorCode::FormatError, "wire: unsupported version " + std::to_string(version));
    WireMessage msg;
    std::uint8_t kind = r.u8();
    if (kind < 1 || kind > 5) raise(ErrorCode::FormatError, "wire: unknown message kind");
    msg.kind = static_cast<MsgKind>(kind);
    msg.task_id = r.u64_be();
    msg.server_index = r.u32_be();
    std::uint32_t len = r.u32_be();
    auto payload = r.bytes(len);
    msg.payload.assign(payload.begin(), payload.end());
    std::uint32_t crc = r.u32_be();
    if (!r.done()) raise(ErrorCode::FormatError, "wire: trailing bytes after frame");
    if (crc != payload_crc(msg.payload))
        raise(ErrorCode::FormatError, "wire: payload checksum mismatch");
    return msg;
}

} // namespace ashards
