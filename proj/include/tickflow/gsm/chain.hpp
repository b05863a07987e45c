#pragma once

#include <string>

#include "tickflow/drm.hpp"
#include "tickflow/gsm/gmsk.hpp"
#include "tickflow/observers.hpp"
#include "tickflow/topology.hpp"

namespace tickflow::gsm {

// Fixed chain parameters; the modulator/cipher stages read them.
struct ChainParams {
    std::uint64_t cipher_key = 0x4D6F62696C6531ull;
    GmskParams gmsk;
};

const ChainParams& chain_params();

// Registers the chain transforms ("gsm_speech_encode", ...) with the
// compute registry. Called by the topology builders; safe to repeat.
void register_gsm_computes();

// Runnable topologies with per-frame rates:
//   downlink: src -> spcoder -> chcoder -> inleaver -> cipher -> mod -> snk
//   uplink:   src -> demod -> decipher -> deinleaver -> chdecoder
//                 -> spdecoder -> snk
Topology build_downlink();
Topology build_uplink();

// Same stage order with the legacy connector rates (32000, 6600, 91200,
// 118400, 118400, 177600; width 8) for scheduling and control-plane work.
Topology build_downlink_rates();

enum class DownlinkBug { None, EarlyAck, DropCancel, MuteSinkAck };

// Control-plane model of the downlink for verification: closed (the source
// always has data), two ticks per stage, bootstrap ack 0:1600.
// EarlyAck: the cipher stage acks on receipt while computing slowly.
// DropCancel: the interleaver takes at startup but never cancels.
// MuteSinkAck: the sink never acks upstream.
DrmProgram build_downlink_control(DownlinkBug bug = DownlinkBug::None);

// S1/S2/S3 instantiated over a downlink control model with bound D.
struct GsmObservers {
    SignalTable table;
    std::vector<ObserverSpec> specs;
};
GsmObservers make_gsm_observers(const DrmProgram& drm, std::uint32_t bound);

// Convenience: composed VERIFY program (model || S1 || S2 || S3).
Program build_verify_program(const DrmProgram& drm, std::uint32_t bound);

// External formats: PCM is little-endian signed 16-bit mono; IQ is
// interleaved little-endian float32 pairs.
std::vector<std::uint8_t> pcm_to_bytes(const std::vector<std::int16_t>& pcm);
std::vector<std::int16_t> bytes_to_pcm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> iq_to_bytes(const std::vector<std::complex<double>>& iq);
std::vector<std::complex<double>> bytes_to_iq(const std::vector<std::uint8_t>& bytes);

}  // namespace tickflow::gsm
