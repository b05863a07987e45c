#pragma once

#include <array>
#include <cstdint>

#include "tickflow/gsm/channel.hpp"

namespace tickflow::gsm {

constexpr std::size_t kBurstsPerFrame = 8;
constexpr std::size_t kBurstPayloadBits = 57;

struct Burst {
    BitVec payload;  // exactly 57
    std::uint64_t block_index = 0;
    std::uint32_t burst_index = 0;  // 0..7
};

// Bijection: frame bit k lands in burst (k mod 8) at position (k div 8).
std::array<Burst, kBurstsPerFrame> interleave(const CodedFrame& frame,
                                              std::uint64_t block_index = 0);
CodedFrame deinterleave(const std::array<Burst, kBurstsPerFrame>& bursts);

}  // namespace tickflow::gsm
