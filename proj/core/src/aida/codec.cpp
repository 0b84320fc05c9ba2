#include "wsn/aida/codec.hpp"

namespace wsn::aida {

std::vector<std::uint8_t> encodeFrame(std::span<const std::vector<std::uint8_t>> units) {
    std::size_t total = 0;
    for (const auto& u : units)
        total += 2 + u.size();
    std::vector<std::uint8_t> out;
    out.reserve(total);
    for (const auto& u : units) {
        const std::size_t n = u.size();
        out.push_back(static_cast<std::uint8_t>(n & 0xff));
        out.push_back(static_cast<std::uint8_t>((n >> 8) & 0xff));
        out.insert(out.end(), u.begin(), u.end());
    }
    return out;
}

std::optional<std::vector<std::vector<std::uint8_t>>>
decodeFrame(std::span<const std::uint8_t> bytes) {
    std::vector<std::vector<std::uint8_t>> units;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 2)
            return std::nullopt;
        const std::size_t n = static_cast<std::size_t>(bytes[pos]) |
                              (static_cast<std::size_t>(bytes[pos + 1]) << 8);
        pos += 2;
        if (bytes.size() - pos < n)
            return std::nullopt;
        units.emplace_back(bytes.begin() + pos, bytes.begin() + pos + n);
        pos += n;
    }
    if (units.empty())
        return std::nullopt;
    return units;
}

} // namespace wsn::aida
