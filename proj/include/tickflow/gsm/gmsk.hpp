#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "tickflow/gsm/bits.hpp"

namespace tickflow::gsm {

struct GmskParams {
    std::uint32_t oversampling = 8;  // samples per bit, >= 4
    double bt = 0.3;                 // Gaussian bandwidth-time product
    std::uint32_t span_bits = 4;     // Gaussian filter span, in bit periods
};

struct IqSampleBlock {
    std::vector<std::complex<double>> samples;  // unit envelope
    std::uint32_t oversampling = 8;
};

// Gaussian-filtered MSK: +-pi/2 of phase per bit before smoothing, constant
// envelope by construction. One guard bit is prepended and appended; the
// output covers guards too, and the demodulator drops them.
IqSampleBlock gmsk_modulate(const BitVec& bits, const GmskParams& params = {});

// Differential detector over one bit period; exact on a noiseless channel.
BitVec gmsk_demodulate(const IqSampleBlock& block, const GmskParams& params = {});

std::size_t gmsk_samples_for_bits(std::size_t bits, const GmskParams& params = {});

}  // namespace tickflow::gsm
