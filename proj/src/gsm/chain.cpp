#include "tickflow/gsm/chain.hpp"

#include <cstring>

#include "tickflow/gsm/cipher.hpp"
#include "tickflow/gsm/speech.hpp"

namespace tickflow::gsm {

namespace {

constexpr std::uint64_t kIqSamplesPerFrame = 8 * (kBurstPayloadBits + 2) * 8;  // osr 8

BitVec bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    BitVec bits(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bits[i] = bytes[i] & 1;
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(const BitVec& bits) {
    return std::vector<std::uint8_t>(bits.begin(), bits.end());
}

std::vector<std::uint8_t> frame_cipher(const SampleRange& in, const std::vector<std::uint8_t>& bytes) {
    auto frame_index = in.index / kCodedFrameBits;
    BitVec bits = bytes_to_bits(bytes);
    BitVec out;
    out.reserve(bits.size());
    for (std::uint32_t b = 0; b < kBurstsPerFrame; ++b) {
        Burst burst;
        burst.payload.assign(bits.begin() + b * kBurstPayloadBits,
                             bits.begin() + (b + 1) * kBurstPayloadBits);
        burst.block_index = frame_index;
        burst.burst_index = b;
        auto ks = keystream(chain_params().cipher_key, frame_index, b, kBurstPayloadBits);
        auto enc = cipher(burst, ks);
        out.insert(out.end(), enc.payload.begin(), enc.payload.end());
    }
    return bits_to_bytes(out);
}

}  // namespace

const ChainParams& chain_params() {
    static ChainParams params;
    return params;
}

void register_gsm_computes() {
    auto& reg = ComputeRegistry::instance();
    if (reg.has("gsm_speech_encode")) return;

    reg.add("gsm_speech_encode", [](const SampleRange& in, const std::vector<std::uint8_t>& bytes) {
        auto block = speech_encode(bytes_to_pcm(bytes), in.index / kPcmFrameSamples);
        return bits_to_bytes(block.bits);
    });
    reg.add("gsm_speech_decode", [](const SampleRange&, const std::vector<std::uint8_t>& bytes) {
        SpeechBlock block;
        block.bits = bytes_to_bits(bytes);
        return pcm_to_bytes(speech_decode(block));
    });
    reg.add("gsm_channel_encode", [](const SampleRange&, const std::vector<std::uint8_t>& bytes) {
        SpeechBlock block;
        block.bits = bytes_to_bits(bytes);
        return bits_to_bytes(channel_encode(block).bits);
    });
    reg.add("gsm_channel_decode", [](const SampleRange&, const std::vector<std::uint8_t>& bytes) {
        CodedFrame frame;
        frame.bits = bytes_to_bits(bytes);
        return bits_to_bytes(channel_decode(frame).block.bits);
    });
    reg.add("gsm_interleave", [](const SampleRange& in, const std::vector<std::uint8_t>& bytes) {
        CodedFrame frame;
        frame.bits = bytes_to_bits(bytes);
        auto bursts = interleave(frame, in.index / kCodedFrameBits);
        std::vector<std::uint8_t> out;
        out.reserve(kCodedFrameBits);
        for (const auto& b : bursts) out.insert(out.end(), b.payload.begin(), b.payload.end());
        return out;
    });
    reg.add("gsm_deinterleave", [](const SampleRange&, const std::vector<std::uint8_t>& bytes) {
        std::array<Burst, kBurstsPerFrame> bursts;
        auto bits = bytes_to_bits(bytes);
        for (std::uint32_t b = 0; b < kBurstsPerFrame; ++b) {
            bursts[b].payload.assign(bits.begin() + b * kBurstPayloadBits,
                                     bits.begin() + (b + 1) * kBurstPayloadBits);
            bursts[b].burst_index = b;
        }
        return bits_to_bytes(deinterleave(bursts).bits);
    });
    reg.add("gsm_cipher", frame_cipher);
    reg.add("gsm_decipher", frame_cipher);  // XOR is an involution
    reg.add("gsm_modulate", [](const SampleRange&, const std::vector<std::uint8_t>& bytes) {
        auto bits = bytes_to_bits(bytes);
        std::vector<std::uint8_t> out;
        for (std::uint32_t b = 0; b < kBurstsPerFrame; ++b) {
            BitVec burst(bits.begin() + b * kBurstPayloadBits,
                         bits.begin() + (b + 1) * kBurstPayloadBits);
            auto iq = gmsk_modulate(burst, chain_params().gmsk);
            auto burst_bytes = iq_to_bytes(iq.samples);
            out.insert(out.end(), burst_bytes.begin(), burst_bytes.end());
        }
        return out;
    });
    reg.add("gsm_demodulate", [](const SampleRange&, const std::vector<std::uint8_t>& bytes) {
        const auto& p = chain_params().gmsk;
        auto iq = bytes_to_iq(bytes);
        const std::size_t per_burst = gmsk_samples_for_bits(kBurstPayloadBits, p);
        std::vector<std::uint8_t> out;
        out.reserve(kCodedFrameBits);
        for (std::uint32_t b = 0; b < kBurstsPerFrame; ++b) {
            IqSampleBlock block;
            block.oversampling = p.oversampling;
            block.samples.assign(iq.begin() + b * per_burst, iq.begin() + (b + 1) * per_burst);
            auto bits = gmsk_demodulate(block, p);
            out.insert(out.end(), bits.begin(), bits.end());
        }
        return out;
    });
}

namespace {

StageDescriptor make_stage(std::string name, StageKind kind, std::uint64_t in_rate,
                           std::uint32_t in_width, std::uint64_t out_rate,
                           std::uint32_t out_width, std::string compute) {
    StageDescriptor s;
    s.name = std::move(name);
    s.kind = kind;
    s.in_rate = in_rate;
    s.in_width = in_width;
    s.out_rate = out_rate;
    s.out_width = out_width;
    s.compute_name = compute;
    s.compute = make_builtin_compute(compute, in_rate, out_rate, in_width, out_width);
    return s;
}

}  // namespace

Topology build_downlink() {
    register_gsm_computes();
    Topology t;
    auto src = make_stage("src", StageKind::Source, kPcmFrameSamples, 2, kPcmFrameSamples, 2,
                          "passthrough");
    src.init_range = SampleRange{0, kPcmFrameSamples};
    t.add_stage(std::move(src));
    t.add_stage(make_stage("spcoder", StageKind::Intermediate, kPcmFrameSamples, 2,
                           kSpeechBlockBits, 1, "gsm_speech_encode"));
    t.add_stage(make_stage("chcoder", StageKind::Intermediate, kSpeechBlockBits, 1,
                           kCodedFrameBits, 1, "gsm_channel_encode"));
    t.add_stage(make_stage("inleaver", StageKind::Intermediate, kCodedFrameBits, 1,
                           kCodedFrameBits, 1, "gsm_interleave"));
    t.add_stage(make_stage("cipher", StageKind::Intermediate, kCodedFrameBits, 1, kCodedFrameBits,
                           1, "gsm_cipher"));
    t.add_stage(make_stage("mod", StageKind::Intermediate, kCodedFrameBits, 1,
                           kIqSamplesPerFrame, 8, "gsm_modulate"));
    t.add_stage(make_stage("snk", StageKind::Sink, kIqSamplesPerFrame, 8, 0, 0, "passthrough"));
    t.connect("src", "spcoder", kPcmFrameSamples, 2);
    t.connect("spcoder", "chcoder", kSpeechBlockBits, 1);
    t.connect("chcoder", "inleaver", kCodedFrameBits, 1);
    t.connect("inleaver", "cipher", kCodedFrameBits, 1);
    t.connect("cipher", "mod", kCodedFrameBits, 1);
    t.connect("mod", "snk", kIqSamplesPerFrame, 8);
    return t;
}

Topology build_uplink() {
    register_gsm_computes();
    Topology t;
    auto src = make_stage("src", StageKind::Source, kIqSamplesPerFrame, 8, kIqSamplesPerFrame, 8,
                          "passthrough");
    src.init_range = SampleRange{0, kIqSamplesPerFrame};
    t.add_stage(std::move(src));
    t.add_stage(make_stage("demod", StageKind::Intermediate, kIqSamplesPerFrame, 8,
                           kCodedFrameBits, 1, "gsm_demodulate"));
    t.add_stage(make_stage("decipher", StageKind::Intermediate, kCodedFrameBits, 1,
                           kCodedFrameBits, 1, "gsm_decipher"));
    t.add_stage(make_stage("deinleaver", StageKind::Intermediate, kCodedFrameBits, 1,
                           kCodedFrameBits, 1, "gsm_deinterleave"));
    t.add_stage(make_stage("chdecoder", StageKind::Intermediate, kCodedFrameBits, 1,
                           kSpeechBlockBits, 1, "gsm_channel_decode"));
    t.add_stage(make_stage("spdecoder", StageKind::Intermediate, kSpeechBlockBits, 1,
                           kPcmFrameSamples, 2, "gsm_speech_decode"));
    t.add_stage(make_stage("snk", StageKind::Sink, kPcmFrameSamples, 2, 0, 0, "passthrough"));
    t.connect("src", "demod", kIqSamplesPerFrame, 8);
    t.connect("demod", "decipher", kCodedFrameBits, 1);
    t.connect("decipher", "deinleaver", kCodedFrameBits, 1);
    t.connect("deinleaver", "chdecoder", kCodedFrameBits, 1);
    t.connect("chdecoder", "spdecoder", kSpeechBlockBits, 1);
    t.connect("spdecoder", "snk", kPcmFrameSamples, 2);
    return t;
}

Topology build_downlink_rates() {
    Topology t;
    const std::uint64_t rate1 = 32000, rate2 = 6600, rate3 = 91200, rate4 = 118400,
                        rate5 = 177600;
    auto src = make_stage("src", StageKind::Source, rate1, 8, rate1, 8, "passthrough");
    src.init_range = SampleRange{0, 1600};
    t.add_stage(std::move(src));
    t.add_stage(make_stage("spcoder", StageKind::Intermediate, rate1, 8, rate2, 8, "tile"));
    t.add_stage(make_stage("chcoder", StageKind::Intermediate, rate2, 8, rate3, 8, "tile"));
    t.add_stage(make_stage("inleaver", StageKind::Intermediate, rate3, 8, rate4, 8, "tile"));
    t.add_stage(make_stage("cipher", StageKind::Intermediate, rate4, 8, rate4, 8, "tile"));
    t.add_stage(make_stage("mod", StageKind::Intermediate, rate4, 8, rate5, 8, "tile"));
    t.add_stage(make_stage("snk", StageKind::Sink, rate5, 8, 0, 0, "passthrough"));
    t.connect("src", "spcoder", rate1, 8);
    t.connect("spcoder", "chcoder", rate2, 8);
    t.connect("chcoder", "inleaver", rate3, 8);
    t.connect("inleaver", "cipher", rate4, 8);
    t.connect("cipher", "mod", rate4, 8);
    t.connect("mod", "snk", rate5, 8);
    return t;
}

DrmProgram build_downlink_control(DownlinkBug bug) {
    auto topo = build_downlink_rates();
    DrmOptions opts;
    opts.cost = StageCost::TwoTick;
    opts.rdv = RdvPolicy::StartupHold;
    opts.boot = BootMode::Immediate;
    opts.source_data = SourceData::AlwaysOn;
    opts.init_range = SampleRange{0, 1600};
    switch (bug) {
        case DownlinkBug::None:
            break;
        case DownlinkBug::EarlyAck:
            // a slow computing function whose stage acknowledges receipt
            // instead of consumption: upstream keeps pushing
            topo.stage(topo.stage_index("cipher")).extra_compute_ticks = 3;
            opts.rdv = RdvPolicy::Off;
            opts.bugs.ack_on_receipt = topo.stage_index("cipher");
            break;
        case DownlinkBug::DropCancel:
            opts.bugs.drop_cancel = topo.stage_index("inleaver");
            break;
        case DownlinkBug::MuteSinkAck:
            opts.bugs.mute_ack = topo.stage_index("snk");
            break;
    }
    return build_drm(topo, opts);
}

GsmObservers make_gsm_observers(const DrmProgram& drm, std::uint32_t bound) {
    const auto& topo = drm.topology;
    ObserverBuilder builder(drm.program.signals());
    const auto& table = drm.program.signals();

    std::vector<std::pair<std::string, std::string>> s1_pairs;
    for (std::uint32_t e = 0; e < topo.edges().size(); ++e) {
        auto down = topo.edges()[e].down;
        s1_pairs.emplace_back(table.name(drm.stage_signals[down].ready),
                              table.name(drm.edge_signals[e].compute));
    }

    // delivery begins at the source's incoming ack and ends at the sink's
    auto first_edge = topo.out_edges(topo.sources().front()).front();
    auto last_edge = topo.in_edges(topo.sinks().front()).front();
    std::string src_ack = table.name(drm.edge_signals[first_edge].ack);
    std::string snk_ack = table.name(drm.edge_signals[last_edge].ack);

    std::vector<ObserverBuilder::S3Instance> instances;
    for (std::uint32_t s = 0; s < topo.stages().size(); ++s) {
        const auto& st = topo.stage(s);
        ObserverBuilder::S3Instance inst;
        inst.name = st.name;
        if (st.kind == StageKind::Source) {
            auto e = topo.out_edges(s).front();
            inst.is = {table.name(drm.edge_signals[e].ack)};
            inst.os = table.name(drm.edge_signals[e].compute);
        } else if (st.kind == StageKind::Sink) {
            auto e = topo.in_edges(s).front();
            inst.is = {table.name(drm.edge_signals[e].compute)};
            inst.os = table.name(drm.edge_signals[e].ack);
        } else {
            auto ein = topo.in_edges(s).front();
            auto eout = topo.out_edges(s).front();
            inst.is = {table.name(drm.edge_signals[ein].compute),
                       table.name(drm.edge_signals[eout].ack)};
            inst.os = table.name(drm.edge_signals[ein].ack);
        }
        instances.push_back(std::move(inst));
    }

    GsmObservers out;
    out.specs.push_back(builder.s1(s1_pairs));
    out.specs.push_back(builder.s2(bound, src_ack, snk_ack));
    out.specs.push_back(builder.s3(bound, instances));
    out.table = builder.table();
    return out;
}

Program build_verify_program(const DrmProgram& drm, std::uint32_t bound) {
    auto obs = make_gsm_observers(drm, bound);
    return compose(drm.program, obs.table, obs.specs);
}

std::vector<std::uint8_t> pcm_to_bytes(const std::vector<std::int16_t>& pcm) {
    std::vector<std::uint8_t> out(pcm.size() * 2);
    for (std::size_t i = 0; i < pcm.size(); ++i) {
        auto u = static_cast<std::uint16_t>(pcm[i]);
        out[2 * i] = static_cast<std::uint8_t>(u & 0xff);
        out[2 * i + 1] = static_cast<std::uint8_t>(u >> 8);
    }
    return out;
}

std::vector<std::int16_t> bytes_to_pcm(const std::vector<std::uint8_t>& bytes) {
    std::vector<std::int16_t> out(bytes.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8)));
    return out;
}

std::vector<std::uint8_t> iq_to_bytes(const std::vector<std::complex<double>>& iq) {
    std::vector<std::uint8_t> out(iq.size() * 8);
    for (std::size_t i = 0; i < iq.size(); ++i) {
        float re = static_cast<float>(iq[i].real());
        float im = static_cast<float>(iq[i].imag());
        std::memcpy(&out[8 * i], &re, 4);
        std::memcpy(&out[8 * i + 4], &im, 4);
    }
    return out;
}

std::vector<std::complex<double>> bytes_to_iq(const std::vector<std::uint8_t>& bytes) {
    std::vector<std::complex<double>> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        float re, im;
        std::memcpy(&re, &bytes[8 * i], 4);
        std::memcpy(&im, &bytes[8 * i + 4], 4);
        out[i] = {re, im};
    }
    return out;
}

}  // namespace tickflow::gsm
