#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "tickflow/dpm.hpp"
#include "tickflow/drm.hpp"
#include "tickflow/fsm.hpp"
#include "tickflow/gsm/chain.hpp"
#include "tickflow/observers.hpp"

using namespace tickflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitStateExplosion = 3;

Topology resolve_topology(const std::string& spec) {
    if (spec == "downlink") return gsm::build_downlink();
    if (spec == "uplink") return gsm::build_uplink();
    if (spec == "downlink-rates") return gsm::build_downlink_rates();
    if (!std::filesystem::exists(spec))
        raise(ErrorCode::IoFailure, "topology file not found: " + spec);
    return load_topology_json(spec);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoFailure, "cannot read '" + path + "'");
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoFailure, "cannot write '" + path + "'");
    out << text;
}

std::vector<std::uint8_t> synthesize_feed(const Topology& topo, std::uint32_t source,
                                          std::uint64_t items, std::uint64_t seed) {
    const auto& s = topo.stage(source);
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bytes(items * s.source_frame() * s.in_width);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    return bytes;
}

struct RunArgs {
    std::string topology = "downlink";
    std::string scheduler = "drm";
    std::string cost = "twotick";
    std::uint64_t ticks = 0;
    std::uint64_t items = 0;
    std::string in_path, out_path, trace_path;
    std::uint64_t seed = 1;
    std::uint32_t workers = 1;
};

int cmd_run(const RunArgs& args) {
    auto topo = resolve_topology(args.topology);
    auto sources = topo.sources();
    auto sinks = topo.sinks();

    std::vector<std::uint8_t> feed;
    std::uint64_t items = args.items;
    if (!args.in_path.empty()) {
        feed = read_file(args.in_path);
        const auto& s = topo.stage(sources.front());
        std::uint64_t frames = feed.size() / (s.source_frame() * s.in_width);
        if (items == 0 || items > frames) items = frames;
    } else {
        if (items == 0) items = args.ticks ? args.ticks : 16;
        feed = synthesize_feed(topo, sources.front(), items, args.seed);
    }

    std::ofstream trace_file;
    std::ostream* trace = nullptr;
    if (!args.trace_path.empty()) {
        trace_file.open(args.trace_path);
        if (!trace_file) raise(ErrorCode::IoFailure, "cannot write '" + args.trace_path + "'");
        trace = &trace_file;
    }

    RunSummary summary;
    std::vector<std::uint8_t> capture;
    if (args.scheduler == "dpm") {
        DpmScheduler dpm(topo);
        if (trace) dpm.set_trace(trace);
        dpm.dataplane().feed_source(sources.front(), feed);
        const auto& snk = topo.stage(sinks.front());
        for (std::uint64_t i = 0; i < items; ++i)
            dpm.pull(sinks.front(), SampleRange{i * snk.in_rate, snk.in_rate});
        summary = dpm.summary();
        capture = dpm.dataplane().sink_capture(sinks.front());
    } else if (args.scheduler == "drm") {
        DrmOptions opts;
        opts.cost = args.cost == "unit" ? StageCost::Unit : StageCost::TwoTick;
        opts.rdv = opts.cost == StageCost::Unit ? RdvPolicy::Off : RdvPolicy::StartupHold;
        PipelineRunner runner(build_drm(topo, opts), Dataplane(topo));
        runner.set_workers(args.workers);
        if (trace) runner.set_trace(trace);
        runner.dataplane().feed_source(sources.front(), feed);
        std::uint64_t max_ticks =
            args.ticks ? args.ticks : items * topo.stages().size() * 4 + 64;
        if (args.ticks) {
            runner.set_item_budget(items);
            runner.run_ticks(args.ticks);
        } else {
            runner.run_items(items, max_ticks);
        }
        summary = runner.run_stats().summary(topo.stages().size());
        capture = runner.dataplane().sink_capture(sinks.front());
    } else {
        raise(ErrorCode::BadConfig, "unknown scheduler '" + args.scheduler + "'");
    }

    if (!args.out_path.empty()) write_file(args.out_path, capture);
    std::cout << format_summary(summary) << "\n";
    return kExitOk;
}

gsm::DownlinkBug bug_from_string(const std::string& name) {
    if (name == "none") return gsm::DownlinkBug::None;
    if (name == "early-ack") return gsm::DownlinkBug::EarlyAck;
    if (name == "drop-cancel") return gsm::DownlinkBug::DropCancel;
    if (name == "drop-sink-ack") return gsm::DownlinkBug::MuteSinkAck;
    raise(ErrorCode::BadConfig, "unknown injection '" + name + "'");
}

struct VerifyArgs {
    std::string model = "downlink-control";
    std::string inject = "none";
    std::string observers = "s1,s2,s3";
    std::uint32_t bound = 14;
    std::string witness_path = "witness.json";
    std::string fsm_path;
    std::size_t max_states = 5'000'000;
};

DrmProgram build_model(const std::string& model, const std::string& inject) {
    if (model == "downlink-control") return gsm::build_downlink_control(bug_from_string(inject));
    // control-plane build of an arbitrary topology file
    auto topo = resolve_topology(model);
    DrmOptions opts;
    opts.cost = StageCost::TwoTick;
    opts.rdv = RdvPolicy::StartupHold;
    opts.source_data = SourceData::AlwaysOn;
    return build_drm(topo, opts);
}

int cmd_verify(const VerifyArgs& args) {
    auto drm = build_model(args.model, args.inject);
    auto observers = gsm::make_gsm_observers(drm, args.bound);

    std::vector<ObserverSpec> wanted;
    for (const auto& spec : observers.specs) {
        std::string key = spec.name;
        for (auto& c : key) c = static_cast<char>(std::tolower(c));
        if (args.observers.find(key) != std::string::npos) wanted.push_back(spec);
    }
    auto program = compose(drm.program, observers.table, wanted);

    std::vector<Letter> alphabet{make_letter(program.signals(), {})};
    Fsm fsm;
    try {
        fsm = extract_fsm(program, alphabet, ExtractOptions{args.max_states});
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StateExplosion) {
            std::cerr << e.what() << "\n";
            return kExitStateExplosion;
        }
        throw;
    }
    std::cout << "model=" << args.model << " inject=" << args.inject << " states="
              << fsm.state_count << " bound=" << args.bound << "\n";
    if (!args.fsm_path.empty()) write_text(args.fsm_path, fsm_to_text(fsm));

    bool violated = false;
    nlohmann::json all = nlohmann::json::array();
    for (const auto& spec : wanted) {
        auto verdict = check_emission(fsm, spec.violation);
        std::cout << spec.violation << ": "
                  << (verdict.possibly_emitted ? "possibly-emitted" : "never-emitted");
        if (verdict.possibly_emitted) {
            violated = true;
            std::cout << " (witness length " << verdict.witness.size() << ")";
        }
        std::cout << "\n";
        nlohmann::json j = nlohmann::json::parse(verdict_to_json(verdict));
        if (verdict.possibly_emitted) {
            nlohmann::json steps = nlohmann::json::array();
            for (const auto& letter : verdict.witness)
                steps.push_back(letter_to_strings(program.signals(), letter));
            j["witness"] = steps;
        }
        j["model"] = args.model;
        j["inject"] = args.inject;
        j["bound"] = args.bound;
        all.push_back(j);
    }
    if (violated && !args.witness_path.empty()) {
        write_text(args.witness_path, all.dump(2));
        std::cout << "witness file: " << args.witness_path << "\n";
    }
    return violated ? kExitViolation : kExitOk;
}

struct ReplayArgs {
    std::string witness_path;
    std::string model = "downlink-control";
    std::string inject = "none";
    std::uint32_t bound = 14;
};

int cmd_replay(const ReplayArgs& args) {
    auto text = read_file(args.witness_path);
    auto all = nlohmann::json::parse(std::string(text.begin(), text.end()));
    auto drm = build_model(args.model, args.inject);
    auto observers = gsm::make_gsm_observers(drm, args.bound);
    auto program = compose(drm.program, observers.table, observers.specs);

    int exit_code = kExitOk;
    for (const auto& j : all) {
        if (j.value("status", "") != "possibly-emitted") continue;
        std::string signal = j.at("signal").get<std::string>();
        auto target = program.signals().require(signal);
        std::vector<Letter> witness;
        for (const auto& step : j.at("witness"))
            witness.push_back(
                letter_from_strings(program.signals(), step.get<std::vector<std::string>>()));
        auto reactions = replay_witness(program, witness);
        for (const auto& r : reactions) std::cout << format_reaction(r, program.signals()) << "\n";
        if (reactions.empty() || !reactions.back().emitted(target)) {
            std::cout << "WitnessMismatch: " << signal
                      << " was not emitted at the final tick\n";
            exit_code = kExitViolation;
        } else {
            std::cout << "confirmed: " << signal << " emitted at tick "
                      << reactions.back().tick << "\n";
        }
    }
    return exit_code;
}

struct BenchArgs {
    std::uint32_t stages = 7;
    std::uint64_t items = 100;
    std::string topology;
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& args) {
    Topology topo =
        args.topology.empty() ? make_chain_topology(args.stages) : resolve_topology(args.topology);
    auto cmp = compare_schedulers(topo, args.items, args.seed);
    std::cout << "stages=" << topo.stages().size() << " items=" << args.items
              << " dpm_ticks=" << cmp.dpm_ticks << " drm_ticks=" << cmp.drm_ticks
              << " outputs=" << (cmp.outputs_identical ? "identical" : "DIVERGED") << "\n";
    return cmp.outputs_identical ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tick-driven reactive DSP pipelines with a built-in model checker"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "drive a pipeline");
    run->add_option("--topology", run_args.topology,
                    "builtin name (downlink, uplink, downlink-rates) or JSON file");
    run->add_option("--scheduler", run_args.scheduler, "drm or dpm")
        ->check(CLI::IsMember({"drm", "dpm"}));
    run->add_option("--cost", run_args.cost, "twotick or unit")
        ->check(CLI::IsMember({"twotick", "unit"}));
    run->add_option("--ticks", run_args.ticks, "tick limit");
    run->add_option("--items", run_args.items, "frames to push");
    run->add_option("--in", run_args.in_path, "input byte stream");
    run->add_option("--out", run_args.out_path, "sink output file");
    run->add_option("--trace", run_args.trace_path, "reaction trace file");
    run->add_option("--seed", run_args.seed, "seed for synthesized input");
    run->add_option("--workers", run_args.workers, "compute worker threads");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "model-check safety observers");
    verify->add_option("--model", verify_args.model, "downlink-control or a topology JSON file");
    verify->add_option("--inject", verify_args.inject,
                       "none, early-ack, drop-cancel, drop-sink-ack");
    verify->add_option("--observers", verify_args.observers, "subset of s1,s2,s3");
    verify->add_option("--bound", verify_args.bound, "tick bound D");
    verify->add_option("--witness", verify_args.witness_path, "witness output file");
    verify->add_option("--fsm", verify_args.fsm_path, "transition table output file");
    verify->add_option("--max-states", verify_args.max_states, "state cap");

    ReplayArgs replay_args;
    auto* replay = app.add_subcommand("replay", "replay a counterexample witness");
    replay->add_option("--witness", replay_args.witness_path, "witness file")->required();
    replay->add_option("--model", replay_args.model, "model the witness was produced against");
    replay->add_option("--inject", replay_args.inject, "injection used at verify time");
    replay->add_option("--bound", replay_args.bound, "tick bound D");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "compare schedulers on one topology");
    bench->add_option("--stages", bench_args.stages, "chain length for the synthetic topology");
    bench->add_option("--items", bench_args.items, "frames to deliver");
    bench->add_option("--topology", bench_args.topology, "topology JSON file");
    bench->add_option("--seed", bench_args.seed, "feed seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (replay->parsed()) return cmd_replay(replay_args);
        if (bench->parsed()) return cmd_bench(bench_args);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        if (e.code() == ErrorCode::StateExplosion) return kExitStateExplosion;
        if (e.code() == ErrorCode::IoFailure || e.code() == ErrorCode::BadConfig) return kExitUsage;
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
