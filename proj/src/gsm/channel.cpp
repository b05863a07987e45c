#include "tickflow/gsm/channel.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "tickflow/errors.hpp"

namespace tickflow::gsm {

namespace {

const ChannelCodeLayout kLayout;

// CRC over the leading class-1 bits, poly x^3 + x + 1.
BitVec parity_of(const BitVec& bits) {
    std::uint32_t reg = 0;
    for (std::size_t i = 0; i < kLayout.parity_over; ++i) {
        std::uint32_t feedback = ((reg >> 2) & 1) ^ bits[i];
        reg = (reg << 1) & 0x7;
        if (feedback) reg ^= 0b011;  // x + 1 taps; x^3 is the shift-out
    }
    return {static_cast<std::uint8_t>((reg >> 2) & 1), static_cast<std::uint8_t>((reg >> 1) & 1),
            static_cast<std::uint8_t>(reg & 1)};
}

inline std::uint8_t conv_bit(std::uint32_t window, std::uint32_t generator) {
    return static_cast<std::uint8_t>(std::popcount(window & generator) & 1);
}

}  // namespace

const ChannelCodeLayout& channel_layout() { return kLayout; }

CodedFrame channel_encode(const SpeechBlock& block) {
    if (block.bits.size() != kSpeechBlockBits)
        raise(ErrorCode::WrongFrameLength, "channel encoder expects a 260-bit block");

    BitVec u(block.bits.begin(), block.bits.begin() + static_cast<std::ptrdiff_t>(kLayout.class1_bits));
    auto parity = parity_of(u);
    u.insert(u.end(), parity.begin(), parity.end());
    u.insert(u.end(), kLayout.tail_bits, 0);

    CodedFrame frame;
    frame.bits.reserve(kLayout.frame_bits());
    std::uint32_t window = 0;  // bit i of the window is the input i ticks ago
    for (auto bit : u) {
        window = ((window << 1) | bit) & ((1u << kLayout.constraint) - 1);
        frame.bits.push_back(conv_bit(window, kLayout.g0));
        frame.bits.push_back(conv_bit(window, kLayout.g1));
    }
    frame.bits.insert(frame.bits.end(),
                      block.bits.begin() + static_cast<std::ptrdiff_t>(kLayout.class1_bits),
                      block.bits.end());
    return frame;
}

ChannelDecodeResult channel_decode(const CodedFrame& frame) {
    if (frame.bits.size() != kLayout.frame_bits())
        raise(ErrorCode::WrongFrameLength, "channel decoder expects a 456-bit frame");

    const std::size_t n_in = kLayout.conv_in();
    const std::uint32_t n_states = 1u << (kLayout.constraint - 1);
    constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;

    // Viterbi over the protected section. State = last K-1 input bits,
    // newest in the low bit.
    std::vector<std::uint32_t> metric(n_states, kInf);
    std::vector<std::vector<std::uint8_t>> decisions(n_in,
                                                     std::vector<std::uint8_t>(n_states, 0));
    metric[0] = 0;
    auto branch = [&](std::uint32_t state, std::uint32_t bit, std::uint8_t& c0,
                      std::uint8_t& c1) {
        // current bit at D^0, previous bits at D^1..D^4
        std::uint32_t window = (state << 1) | bit;
        c0 = conv_bit(window, kLayout.g0);
        c1 = conv_bit(window, kLayout.g1);
    };

    for (std::size_t step = 0; step < n_in; ++step) {
        std::uint8_t r0 = frame.bits[2 * step];
        std::uint8_t r1 = frame.bits[2 * step + 1];
        std::vector<std::uint32_t> next(n_states, kInf);
        for (std::uint32_t state = 0; state < n_states; ++state) {
            if (metric[state] >= kInf) continue;
            for (std::uint32_t bit = 0; bit <= 1; ++bit) {
                std::uint8_t c0, c1;
                branch(state, bit, c0, c1);
                std::uint32_t cost = metric[state] + (c0 != r0) + (c1 != r1);
                std::uint32_t to = ((state << 1) | bit) & (n_states - 1);
                if (cost < next[to]) {
                    next[to] = cost;
                    decisions[step][to] = static_cast<std::uint8_t>((state >> (kLayout.constraint - 2)) & 1);
                }
            }
        }
        metric = std::move(next);
    }

    // the tail drives the encoder back to state 0
    std::uint32_t state = 0;
    BitVec u(n_in, 0);
    for (std::size_t step = n_in; step-- > 0;) {
        std::uint32_t oldest = decisions[step][state];
        u[step] = static_cast<std::uint8_t>(state & 1);
        state = (state >> 1) | (oldest << (kLayout.constraint - 2));
    }

    ChannelDecodeResult result;
    result.block.bits.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(kLayout.class1_bits));

    BitVec parity(u.begin() + static_cast<std::ptrdiff_t>(kLayout.class1_bits),
                  u.begin() + static_cast<std::ptrdiff_t>(kLayout.class1_bits + kLayout.parity_bits));
    if (parity != parity_of(result.block.bits))
        raise(ErrorCode::UncorrectableFrame, "parity check failed after decoding");

    // errors = disagreement between the received channel bits and the
    // re-encoded survivor path
    SpeechBlock round_trip;
    round_trip.bits = result.block.bits;
    round_trip.bits.insert(round_trip.bits.end(),
                           frame.bits.begin() + static_cast<std::ptrdiff_t>(kLayout.conv_out()),
                           frame.bits.end());
    auto reencoded = channel_encode(round_trip);
    for (std::size_t i = 0; i < kLayout.conv_out(); ++i)
        result.errors_detected += reencoded.bits[i] != frame.bits[i];

    result.block.bits.insert(result.block.bits.end(),
                             frame.bits.begin() + static_cast<std::ptrdiff_t>(kLayout.conv_out()),
                             frame.bits.end());
    return result;
}

}  // namespace tickflow::gsm
