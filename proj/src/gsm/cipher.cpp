#include "tickflow/gsm/cipher.hpp"

#include "tickflow/errors.hpp"

namespace tickflow::gsm {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

BitVec keystream(std::uint64_t key, std::uint64_t frame_index, std::uint32_t burst_index,
                 std::size_t bits) {
    std::uint64_t state = mix64(key ^ mix64(frame_index) ^ mix64(0x5851f42d4c957f2dull + burst_index));
    if (state == 0) state = 0x1ull;
    BitVec out;
    out.reserve(bits);
    // x^64 + x^63 + x^61 + x^60 + 1
    constexpr std::uint64_t taps = 0xD800000000000000ull;
    for (std::size_t i = 0; i < bits; ++i) {
        out.push_back(static_cast<std::uint8_t>(state & 1));
        bool lsb = state & 1;
        state >>= 1;
        if (lsb) state ^= taps;
    }
    return out;
}

Burst cipher(const Burst& burst, const BitVec& ks) {
    if (ks.size() < burst.payload.size())
        raise(ErrorCode::ShortKeystream, "keystream shorter than the burst payload");
    Burst out = burst;
    for (std::size_t i = 0; i < out.payload.size(); ++i) out.payload[i] ^= ks[i] & 1;
    return out;
}

}  // namespace tickflow::gsm
