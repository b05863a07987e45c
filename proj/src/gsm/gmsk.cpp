#include "tickflow/gsm/gmsk.hpp"

#include <cmath>
#include <numbers>

#include "tickflow/errors.hpp"

namespace tickflow::gsm {

namespace {

// Per-sample frequency pulse of one bit: rectangular hold convolved with
// the Gaussian filter for the given BT, scaled so the pulse integrates to
// pi/2. Centered: entry k covers sample offsets relative to the bit start.
std::vector<double> frequency_pulse(const GmskParams& p) {
    const std::size_t osr = p.oversampling;
    const std::size_t half_span = p.span_bits / 2 + 1;
    const std::size_t len = (2 * half_span + 1) * osr;
    std::vector<double> pulse(len, 0.0);
    const double sigma = std::sqrt(std::numbers::ln2) / (2.0 * std::numbers::pi * p.bt);
    double total = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        // sample position in bit periods, relative to the bit's start
        double t = (static_cast<double>(n) + 0.5) / osr - static_cast<double>(half_span);
        // integrate the Gaussian over the bit-wide rectangle [t-1, t]
        const int steps = 16;
        double acc = 0.0;
        for (int i = 0; i < steps; ++i) {
            double x = t - 1.0 + (i + 0.5) / steps;
            acc += std::exp(-x * x / (2.0 * sigma * sigma));
        }
        pulse[n] = acc;
        total += acc;
    }
    const double scale = (std::numbers::pi / 2.0) / total;
    for (auto& v : pulse) v *= scale;
    return pulse;
}

}  // namespace

std::size_t gmsk_samples_for_bits(std::size_t bits, const GmskParams& params) {
    return (bits + 2) * params.oversampling;
}

IqSampleBlock gmsk_modulate(const BitVec& bits, const GmskParams& params) {
    if (params.oversampling < 4)
        raise(ErrorCode::BadOversampling,
              "oversampling " + std::to_string(params.oversampling) + " below 4");
    if (bits.empty()) raise(ErrorCode::WrongFrameLength, "empty bit vector");

    const std::size_t osr = params.oversampling;
    const auto pulse = frequency_pulse(params);
    const std::size_t half_span = params.span_bits / 2 + 1;

    // guard bits keep the differential detector aligned at the edges
    BitVec padded;
    padded.reserve(bits.size() + 2);
    padded.push_back(0);
    padded.insert(padded.end(), bits.begin(), bits.end());
    padded.push_back(0);

    const std::size_t n_samples = padded.size() * osr;
    std::vector<double> freq(n_samples, 0.0);
    for (std::size_t k = 0; k < padded.size(); ++k) {
        const double a = padded[k] ? 1.0 : -1.0;
        // pulse entry 0 corresponds to half_span bit periods before bit k
        const std::int64_t base = (static_cast<std::int64_t>(k) - static_cast<std::int64_t>(half_span)) *
                                  static_cast<std::int64_t>(osr);
        for (std::size_t n = 0; n < pulse.size(); ++n) {
            std::int64_t idx = base + static_cast<std::int64_t>(n);
            if (idx >= 0 && idx < static_cast<std::int64_t>(n_samples))
                freq[static_cast<std::size_t>(idx)] += a * pulse[n];
        }
    }

    IqSampleBlock block;
    block.oversampling = params.oversampling;
    block.samples.reserve(n_samples);
    double phase = 0.0;
    for (std::size_t n = 0; n < n_samples; ++n) {
        phase += freq[n];
        block.samples.emplace_back(std::cos(phase), std::sin(phase));
    }
    return block;
}

BitVec gmsk_demodulate(const IqSampleBlock& block, const GmskParams& params) {
    const std::size_t osr = block.oversampling ? block.oversampling : params.oversampling;
    if (osr < 4) raise(ErrorCode::BadOversampling, "oversampling below 4");
    if (block.samples.size() < 3 * osr)
        raise(ErrorCode::WrongFrameLength, "sample block shorter than the guard framing");
    if (block.samples.size() % osr != 0)
        raise(ErrorCode::WrongFrameLength, "sample count not a whole number of bit periods");

    const std::size_t total_bits = block.samples.size() / osr;
    BitVec out;
    out.reserve(total_bits - 2);
    // phase advance across exactly one bit period, sampled at the period
    // boundaries; bit k's pulse is centered in its own period
    for (std::size_t k = 1; k + 1 < total_bits; ++k) {
        auto z = block.samples[(k + 1) * osr - 1] * std::conj(block.samples[k * osr - 1]);
        out.push_back(z.imag() > 0.0 ? 1 : 0);
    }
    return out;
}

}  // namespace tickflow::gsm
