#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wsn::aida {

// Byte-level aggregate framing: each unit is length-prefixed with a 16-bit
// little-endian count of payload bytes; units are concatenated in order.
// Decoding returns nullopt on any truncation or overrun (the whole frame is
// then dropped, never partially delivered).

std::vector<std::uint8_t> encodeFrame(std::span<const std::vector<std::uint8_t>> units);

std::optional<std::vector<std::vector<std::uint8_t>>>
decodeFrame(std::span<const std::uint8_t> bytes);

} // namespace wsn::aida
