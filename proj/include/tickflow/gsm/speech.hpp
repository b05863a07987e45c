#pragma once

#include <cstdint>
#include <vector>

#include "tickflow/gsm/bits.hpp"

namespace tickflow::gsm {

constexpr std::size_t kPcmFrameSamples = 160;  // 20 ms at 8 kHz
constexpr std::size_t kSpeechBlockBits = 260;

struct SpeechBlock {
    BitVec bits;  // exactly 260
    std::uint64_t frame_index = 0;
};

// Framing codec: packs one 20 ms PCM frame into 260 bits by keeping the top
// two bits of the first 100 samples and the sign bit of the remaining 60.
// decode . encode is a projection: it reproduces the quantized
// representative exactly, and encode . decode . encode == encode bit for
// bit.
SpeechBlock speech_encode(const std::vector<std::int16_t>& pcm, std::uint64_t frame_index = 0);
std::vector<std::int16_t> speech_decode(const SpeechBlock& block);

}  // namespace tickflow::gsm
