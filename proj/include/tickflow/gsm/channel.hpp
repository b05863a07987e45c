#pragma once

#include <cstdint>

#include "tickflow/gsm/bits.hpp"
#include "tickflow/gsm/speech.hpp"

namespace tickflow::gsm {

// Channel code layout. All section sizes live here so tests can pin them.
struct ChannelCodeLayout {
    std::size_t class1_bits = 182;   // convolutionally protected payload
    std::size_t parity_over = 50;    // leading class-1 bits covered by parity
    std::size_t parity_bits = 3;     // CRC, poly x^3 + x + 1
    std::size_t tail_bits = 4;       // flushes the encoder to state 0
    std::uint32_t g0 = 0b11001;      // 1 + D^3 + D^4, lsb = current bit
    std::uint32_t g1 = 0b11011;      // 1 + D + D^3 + D^4
    std::uint32_t constraint = 5;

    std::size_t conv_in() const { return class1_bits + parity_bits + tail_bits; }   // 189
    std::size_t conv_out() const { return 2 * conv_in(); }                          // 378
    std::size_t class2_bits() const { return kSpeechBlockBits - class1_bits; }      // 78
    std::size_t frame_bits() const { return conv_out() + class2_bits(); }           // 456
};

constexpr std::size_t kCodedFrameBits = 456;

struct CodedFrame {
    BitVec bits;  // exactly 456: [conv section | uncoded class-2 section]
};

struct ChannelDecodeResult {
    SpeechBlock block;
    std::uint32_t errors_detected = 0;
};

CodedFrame channel_encode(const SpeechBlock& block);

// Viterbi decode of the protected section plus parity check; corrects at
// least any single bit error there and reports how many channel bits
// disagreed with the re-encoded survivor. Parity failure after decoding is
// an UncorrectableFrame.
ChannelDecodeResult channel_decode(const CodedFrame& frame);

const ChannelCodeLayout& channel_layout();

}  // namespace tickflow::gsm
