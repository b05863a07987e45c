#include "tickflow/dpm.hpp"

#include <random>

#include "tickflow/drm.hpp"

namespace tickflow {

DpmScheduler::DpmScheduler(const Topology& topo) : dataplane_(topo) {
    topo.validate();
    for (const auto& s : topo.stages())
        pull_signal_of_stage_.push_back(pull_signals_.declare("Pull_" + s.name));
}

std::uint64_t DpmScheduler::produced_out(std::uint32_t stage) const {
    const auto& topo = dataplane_.topology();
    if (topo.stage(stage).kind == StageKind::Sink)
        return dataplane_.samples_in(stage);
    auto outs = topo.out_edges(stage);
    return dataplane_.connector(outs.front()).write_cursor();
}

void DpmScheduler::ensure_produced(std::uint32_t stage, std::uint64_t upto,
                                   std::uint32_t depth) {
    const auto& topo = dataplane_.topology();
    const auto& st = topo.stage(stage);
    if (depth > topo.stages().size())
        raise(ErrorCode::BadConfig, "pull depth exceeds chain length");
    while (produced_out(stage) < upto) {
        if (st.kind != StageKind::Source) {
            auto ins = topo.in_edges(stage);
            std::uint32_t up = UINT32_MAX;
            for (auto e : ins)
                if (dataplane_.edge_active(e)) up = topo.edges()[e].up;
            if (up == UINT32_MAX)
                raise(ErrorCode::InsufficientData,
                      "stage '" + st.name + "' has no active upstream to pull from");
            std::uint64_t need = dataplane_.unplanned_window(stage).index + st.in_rate;
            requests_.push_back({stage, SampleRange{need - st.in_rate, st.in_rate}, depth});
            ensure_produced(up, need, depth + 1);
        }
        auto planned = dataplane_.estimate_auto(stage);
        dataplane_.compute(stage, planned);
        ++ticks_;
        Reaction r;
        r.tick = ticks_ - 1;
        r.micro_steps = 1;
        r.outputs.push_back(SignalEvent{pull_signal_of_stage_[stage], {}, r.tick});
        trace_.write(r, pull_signals_);
    }
}

std::vector<std::uint8_t> DpmScheduler::pull(std::uint32_t sink, const SampleRange& want) {
    const auto& topo = dataplane_.topology();
    const auto& st = topo.stage(sink);
    if (st.kind != StageKind::Sink)
        raise(ErrorCode::BadConfig, "pull target '" + st.name + "' is not a sink");
    if (want.empty()) raise(ErrorCode::InsufficientData, "pull of an empty range");
    if (want.end() > dataplane_.samples_in(sink)) {
        requests_.push_back({sink, want, 0});
        ensure_produced(sink, want.end(), 1);
    }
    // served from the capture: re-pulls cost nothing
    const auto& capture = dataplane_.sink_capture(sink);
    auto w = st.in_width;
    if (want.end() * w > capture.size())
        raise(ErrorCode::InsufficientData, "pull beyond captured data");
    return {capture.begin() + static_cast<std::ptrdiff_t>(want.index * w),
            capture.begin() + static_cast<std::ptrdiff_t>(want.end() * w)};
}

RunSummary DpmScheduler::summary() const {
    RunSummary s;
    const auto& topo = dataplane_.topology();
    s.stages = topo.stages().size();
    s.ticks = ticks_;
    for (auto src : topo.sources()) s.produced += dataplane_.frames_computed(src);
    for (auto snk : topo.sinks()) s.consumed += dataplane_.frames_computed(snk);
    return s;
}

SchedulerComparison compare_schedulers(const Topology& topo, std::uint64_t items,
                                       std::uint64_t seed) {
    auto order = topo.validate();
    (void)order;

    // one deterministic feed per source
    std::vector<std::pair<std::uint32_t, std::vector<std::uint8_t>>> feeds;
    for (auto src : topo.sources()) {
        const auto& s = topo.stage(src);
        std::mt19937_64 rng(seed * 1000003 + src);
        std::vector<std::uint8_t> bytes(items * s.source_frame() * s.in_width);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        feeds.emplace_back(src, std::move(bytes));
    }

    DpmScheduler dpm(topo);
    for (const auto& [src, bytes] : feeds) dpm.dataplane().feed_source(src, bytes);
    for (auto snk : topo.sinks()) {
        const auto& st = topo.stage(snk);
        for (std::uint64_t i = 0; i < items; ++i)
            dpm.pull(snk, SampleRange{i * st.in_rate, st.in_rate});
    }

    DrmOptions opts;
    opts.cost = StageCost::Unit;
    opts.rdv = RdvPolicy::Off;
    auto drm = build_drm(topo, opts);
    PipelineRunner runner(std::move(drm), Dataplane(topo));
    for (const auto& [src, bytes] : feeds) runner.dataplane().feed_source(src, bytes);
    runner.run_items(items, items * topo.stages().size() * 4 + 64);

    SchedulerComparison cmp;
    cmp.dpm_ticks = dpm.ticks();
    cmp.drm_ticks = runner.run_stats().ticks;
    cmp.outputs_identical = true;
    for (auto snk : topo.sinks()) {
        if (dpm.dataplane().sink_capture(snk) != runner.dataplane().sink_capture(snk)) {
            cmp.outputs_identical = false;
            raise(ErrorCode::OutputDivergence,
                  "sink '" + topo.stage(snk).name + "' bytes differ between schedulers");
        }
        if (runner.dataplane().frames_computed(snk) < items)
            raise(ErrorCode::OutputDivergence,
                  "sink '" + topo.stage(snk).name + "' under-delivered in the reactive run");
    }
    return cmp;
}

}  // namespace tickflow
