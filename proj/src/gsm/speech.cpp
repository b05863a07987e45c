#include "tickflow/gsm/speech.hpp"

#include "tickflow/errors.hpp"

namespace tickflow::gsm {

namespace {
constexpr std::size_t kWideSamples = 100;  // 2 bits each
}

SpeechBlock speech_encode(const std::vector<std::int16_t>& pcm, std::uint64_t frame_index) {
    if (pcm.size() != kPcmFrameSamples)
        raise(ErrorCode::WrongFrameLength,
              "speech frame must be 160 samples, got " + std::to_string(pcm.size()));
    SpeechBlock block;
    block.frame_index = frame_index;
    block.bits.reserve(kSpeechBlockBits);
    for (std::size_t i = 0; i < kWideSamples; ++i) {
        auto u = static_cast<std::uint16_t>(pcm[i]);
        block.bits.push_back((u >> 15) & 1);
        block.bits.push_back((u >> 14) & 1);
    }
    for (std::size_t i = kWideSamples; i < kPcmFrameSamples; ++i)
        block.bits.push_back((static_cast<std::uint16_t>(pcm[i]) >> 15) & 1);
    return block;
}

std::vector<std::int16_t> speech_decode(const SpeechBlock& block) {
    if (block.bits.size() != kSpeechBlockBits)
        raise(ErrorCode::WrongFrameLength,
              "speech block must be 260 bits, got " + std::to_string(block.bits.size()));
    std::vector<std::int16_t> pcm(kPcmFrameSamples, 0);
    for (std::size_t i = 0; i < kWideSamples; ++i) {
        std::uint16_t u = static_cast<std::uint16_t>(
            (block.bits[2 * i] << 15) | (block.bits[2 * i + 1] << 14));
        pcm[i] = static_cast<std::int16_t>(u);
    }
    for (std::size_t i = kWideSamples; i < kPcmFrameSamples; ++i) {
        std::uint16_t u = static_cast<std::uint16_t>(block.bits[kWideSamples + i] << 15);
        pcm[i] = static_cast<std::int16_t>(u);
    }
    return pcm;
}

}  // namespace tickflow::gsm
