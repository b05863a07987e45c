#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tickflow/dpm.hpp"
#include "tickflow/drm.hpp"
#include "tickflow/fsm.hpp"
#include "tickflow/gsm/chain.hpp"
#include "tickflow/gsm/cipher.hpp"
#include "tickflow/gsm/speech.hpp"
#include "tickflow/observers.hpp"

namespace py = pybind11;
using namespace tickflow;

namespace {

py::dict verify_model(const std::string& inject, std::uint32_t bound) {
    gsm::DownlinkBug bug = gsm::DownlinkBug::None;
    if (inject == "early-ack") bug = gsm::DownlinkBug::EarlyAck;
    else if (inject == "drop-cancel") bug = gsm::DownlinkBug::DropCancel;
    else if (inject == "drop-sink-ack") bug = gsm::DownlinkBug::MuteSinkAck;
    else if (inject != "none") raise(ErrorCode::BadConfig, "unknown injection '" + inject + "'");

    auto drm = gsm::build_downlink_control(bug);
    auto program = gsm::build_verify_program(drm, bound);
    auto fsm = extract_fsm(program, {make_letter(program.signals(), {})});

    py::dict out;
    out["states"] = fsm.state_count;
    py::dict verdicts;
    for (const char* signal : {"S1_VIOLATED", "S2_VIOLATED", "S3_VIOLATED"}) {
        auto v = check_emission(fsm, signal);
        py::dict entry;
        entry["status"] = v.possibly_emitted ? "possibly-emitted" : "never-emitted";
        if (v.possibly_emitted) {
            py::list steps;
            for (const auto& letter : v.witness) steps.append(letter.text);
            entry["witness"] = steps;
            // confirm the witness against the live program
            auto reactions = replay_witness(program, v.witness);
            entry["replay_confirms"] =
                !reactions.empty() &&
                reactions.back().emitted(program.signals().require(signal));
        }
        verdicts[signal] = entry;
    }
    out["verdicts"] = verdicts;
    return out;
}

py::dict compare(std::uint32_t stages, std::uint64_t items, std::uint64_t seed) {
    auto cmp = compare_schedulers(make_chain_topology(stages), items, seed);
    py::dict out;
    out["dpm_ticks"] = cmp.dpm_ticks;
    out["drm_ticks"] = cmp.drm_ticks;
    out["outputs_identical"] = cmp.outputs_identical;
    return out;
}

py::dict run_downlink(const std::vector<std::int16_t>& pcm) {
    auto topo = gsm::build_downlink();
    PipelineRunner runner(build_drm(topo, {}), Dataplane(topo));
    runner.dataplane().feed_source(0, gsm::pcm_to_bytes(pcm));
    std::uint64_t items = pcm.size() / gsm::kPcmFrameSamples;
    runner.run_items(items, items * 40 + 64);
    py::dict out;
    out["ticks"] = runner.run_stats().ticks;
    out["produced"] = runner.run_stats().produced;
    out["consumed"] = runner.run_stats().consumed;
    auto sink = topo.sinks().front();
    out["iq_bytes"] = py::bytes(
        reinterpret_cast<const char*>(runner.dataplane().sink_capture(sink).data()),
        runner.dataplane().sink_capture(sink).size());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "tick-driven reactive DSP pipelines with a built-in model checker";

    m.def("speech_encode", [](const std::vector<std::int16_t>& pcm) {
        return gsm::speech_encode(pcm).bits;
    });
    m.def("speech_decode", [](const gsm::BitVec& bits) {
        gsm::SpeechBlock b;
        b.bits = bits;
        return gsm::speech_decode(b);
    });
    m.def("channel_encode", [](const gsm::BitVec& bits) {
        gsm::SpeechBlock b;
        b.bits = bits;
        return gsm::channel_encode(b).bits;
    });
    m.def("channel_decode", [](const gsm::BitVec& bits) {
        gsm::CodedFrame f;
        f.bits = bits;
        auto r = gsm::channel_decode(f);
        return py::make_tuple(r.block.bits, r.errors_detected);
    });
    m.def("interleave", [](const gsm::BitVec& bits) {
        gsm::CodedFrame f;
        f.bits = bits;
        auto bursts = gsm::interleave(f);
        std::vector<gsm::BitVec> out;
        for (const auto& b : bursts) out.push_back(b.payload);
        return out;
    });
    m.def("deinterleave", [](const std::vector<gsm::BitVec>& payloads) {
        if (payloads.size() != gsm::kBurstsPerFrame)
            raise(ErrorCode::WrongBurstCount, "expected 8 bursts");
        std::array<gsm::Burst, gsm::kBurstsPerFrame> bursts;
        for (std::uint32_t i = 0; i < gsm::kBurstsPerFrame; ++i) {
            bursts[i].payload = payloads[i];
            bursts[i].burst_index = i;
        }
        return gsm::deinterleave(bursts).bits;
    });
    m.def("keystream", &gsm::keystream, py::arg("key"), py::arg("frame_index"),
          py::arg("burst_index"), py::arg("bits"));
    m.def("cipher_burst", [](const gsm::BitVec& payload, const gsm::BitVec& ks) {
        gsm::Burst b;
        b.payload = payload;
        return gsm::cipher(b, ks).payload;
    });
    m.def("gmsk_modulate", [](const gsm::BitVec& bits, std::uint32_t osr, double bt) {
        gsm::GmskParams p;
        p.oversampling = osr;
        p.bt = bt;
        return gsm::gmsk_modulate(bits, p).samples;
    }, py::arg("bits"), py::arg("oversampling") = 8, py::arg("bt") = 0.3);
    m.def("gmsk_demodulate", [](const std::vector<std::complex<double>>& samples,
                                std::uint32_t osr, double bt) {
        gsm::GmskParams p;
        p.oversampling = osr;
        p.bt = bt;
        gsm::IqSampleBlock block;
        block.samples = samples;
        block.oversampling = osr;
        return gsm::gmsk_demodulate(block, p);
    }, py::arg("samples"), py::arg("oversampling") = 8, py::arg("bt") = 0.3);

    m.def("verify_downlink", &verify_model, py::arg("inject") = "none", py::arg("bound") = 14);
    m.def("compare_schedulers", &compare, py::arg("stages") = 7, py::arg("items") = 100,
          py::arg("seed") = 1);
    m.def("run_downlink", &run_downlink, py::arg("pcm"));
}
