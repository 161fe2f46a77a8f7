#ifndef ASHARDS_SERIALIZE_HPP
#define ASHARDS_SERIALIZE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ashards/sharing.hpp"

namespace ashards {

// Framed binary layout for a ShareSet:
//   "ASHR" | version u16 | shape tag u8 | dims (big-endian u64, one per axis) |
//   N u32 | params_digest (32 bytes) | N arrays of interleaved
//   little-endian f64 (re, im) pairs.
// Scalar shapes carry no dims, vectors one, matrices two. N is the number of
// share arrays stored in this container; a per-server slice file stores one.
constexpr std::uint16_t kShareSetVersion = 1;

std::vector<std::uint8_t> shareset_to_bytes(const ShareSet& set);
ShareSet shareset_from_bytes(std::span<const std::uint8_t> bytes);

// JSON debug form with the same fields.
std::string shareset_to_json(const ShareSet& set);

// Container holding only the slice for one server (share array index 0).
ShareSet shareset_slice(const ShareSet& set, std::uint32_t server_index);

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

} // namespace ashards

#endif
