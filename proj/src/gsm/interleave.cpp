#include "tickflow/gsm/interleave.hpp"

#include "tickflow/errors.hpp"

namespace tickflow::gsm {

std::array<Burst, kBurstsPerFrame> interleave(const CodedFrame& frame,
                                              std::uint64_t block_index) {
    if (frame.bits.size() != kCodedFrameBits)
        raise(ErrorCode::WrongFrameLength, "interleaver expects a 456-bit frame");
    std::array<Burst, kBurstsPerFrame> bursts;
    for (std::uint32_t b = 0; b < kBurstsPerFrame; ++b) {
        bursts[b].payload.assign(kBurstPayloadBits, 0);
        bursts[b].block_index = block_index;
        bursts[b].burst_index = b;
    }
    for (std::size_t k = 0; k < kCodedFrameBits; ++k)
        bursts[k % kBurstsPerFrame].payload[k / kBurstsPerFrame] = frame.bits[k];
    return bursts;
}

CodedFrame deinterleave(const std::array<Burst, kBurstsPerFrame>& bursts) {
    for (const auto& b : bursts)
        if (b.payload.size() != kBurstPayloadBits)
            raise(ErrorCode::WrongBurstCount, "burst payload must be 57 bits");
    CodedFrame frame;
    frame.bits.assign(kCodedFrameBits, 0);
    for (std::size_t k = 0; k < kCodedFrameBits; ++k)
        frame.bits[k] = bursts[k % kBurstsPerFrame].payload[k / kBurstsPerFrame];
    return frame;
}

}  // namespace tickflow::gsm
