#ifndef ASHARDS_WIRE_HPP
#define ASHARDS_WIRE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ashards/error.hpp"

namespace ashards {

enum class MsgKind : std::uint8_t {
    Task = 1,
    Shares = 2,
    Result = 3,
    Error = 4,
    Shutdown = 5,
};

// One framed master<->worker message. On the wire:
//   "AMSG" | version u16 | kind u8 | task_id u64 | server_index u32 |
//   payload length u32 | payload bytes | crc32(payload) u32
// Header integers are big-endian.
struct WireMessage {
    MsgKind kind = MsgKind::Task;
    std::uint64_t task_id = 0;
    std::uint32_t server_index = 0;
    std::vector<std::uint8_t> payload;
};

constexpr std::uint16_t kWireVersion = 1;

std::vector<std::uint8_t> encode_frame(const WireMessage& msg);

// Throws FormatError on bad magic/version/kind, truncation, or checksum
// mismatch.
WireMessage decode_frame(std::span<const std::uint8_t> bytes);

// Cursor-style big/little-endian readers and writers shared by the wire and
// file formats.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16_be(std::uint16_t v);
    void u32_be(std::uint32_t v);
    void u64_be(std::uint64_t v);
    void f64_le(double v);
    void bytes(std::span<const std::uint8_t> data);
    std::vector<std::uint8_t> take() { return std::move(buf_); }
    const std::vector<std::uint8_t>& view() const { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}
    std::uint8_t u8();
    std::uint16_t u16_be();
    std::uint32_t u32_be();
    std::uint64_t u64_be();
    double f64_le();
    std::span<const std::uint8_t> bytes(std::size_t n);
    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const;
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace ashards

#endif
