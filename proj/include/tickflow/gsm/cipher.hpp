#pragma once

#include <cstdint>

#include "tickflow/gsm/interleave.hpp"

namespace tickflow::gsm {

// Deterministic keystream from (key, frame, burst): a 64-bit Galois LFSR
// seeded through an integer mix. Shared by both ends; no security claim.
BitVec keystream(std::uint64_t key, std::uint64_t frame_index, std::uint32_t burst_index,
                 std::size_t bits);

// Bitwise XOR with the keystream; its own inverse.
Burst cipher(const Burst& burst, const BitVec& ks);
inline Burst decipher(const Burst& burst, const BitVec& ks) { return cipher(burst, ks); }

}  // namespace tickflow::gsm
