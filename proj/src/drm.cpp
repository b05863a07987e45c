#include "tickflow/drm.hpp"

#include <algorithm>
#include <deque>
#include <future>

namespace tickflow {

namespace {

constexpr std::uint32_t kCap = 2;  // per-counter ceiling: double buffering

struct StageGen {
    // events, in guard order: [d | dm, dp], one per credit counter, then
    // one readiness gate per (gated) credit counter
    std::vector<std::vector<SignalId>> events;  // each folded by OR
    bool has_d = false;   // source availability event present
    bool has_dm = false;  // mark event present
    bool has_dp = false;  // delivery event present
    std::uint32_t gates = 0;  // readiness events at the tail of the list
};

Guard event_guard(const std::vector<SignalId>& sigs, bool positive) {
    std::vector<Guard> alts;
    alts.reserve(sigs.size());
    for (auto s : sigs) alts.push_back(Guard::pre(s));
    Guard g = Guard::any_of(std::move(alts));
    return positive ? g : !g;
}

}  // namespace

std::uint32_t StageDims::tuple_count() const {
    std::uint32_t n = 1;
    if (has_m) n *= kCap + 1;
    if (has_p) n *= kCap + 1;
    for (std::uint32_t i = 0; i < credits; ++i) n *= kCap + 1;
    n *= phases;
    if (has_h) n *= 3;
    return n;
}

std::uint32_t StageDims::encode_tuple(std::uint32_t m, std::uint32_t p,
                                      const std::vector<std::uint32_t>& c, std::uint32_t phase,
                                      std::uint32_t h) const {
    std::uint32_t idx = 0;
    if (has_m) idx = idx * (kCap + 1) + m;
    if (has_p) idx = idx * (kCap + 1) + p;
    for (std::uint32_t i = 0; i < credits; ++i) idx = idx * (kCap + 1) + c.at(i);
    idx = idx * phases + phase;
    if (has_h) idx = idx * 3 + h;
    return idx;
}

void StageDims::decode_tuple(std::uint32_t tuple, std::uint32_t& m, std::uint32_t& p,
                             std::vector<std::uint32_t>& c, std::uint32_t& phase,
                             std::uint32_t& h) const {
    if (has_h) {
        h = tuple % 3;
        tuple /= 3;
    } else {
        h = 2;
    }
    phase = tuple % phases;
    tuple /= phases;
    c.assign(credits, 0);
    for (std::uint32_t i = credits; i-- > 0;) {
        c[i] = tuple % (kCap + 1);
        tuple /= (kCap + 1);
    }
    if (has_p) {
        p = tuple % (kCap + 1);
        tuple /= (kCap + 1);
    } else {
        p = 0;
    }
    m = has_m ? tuple % (kCap + 1) : 0;
}

std::uint32_t StageDims::state_of(std::uint32_t m, std::uint32_t p,
                                  const std::vector<std::uint32_t>& c, std::uint32_t phase,
                                  std::uint32_t h) const {
    auto tuple = encode_tuple(m, p, c, phase, h);
    auto dense = tuple_to_state.at(tuple);
    if (dense == UINT32_MAX)
        raise(ErrorCode::UnreachableState, "stage tuple was pruned as unreachable");
    return dense;
}

DrmProgram build_drm(const Topology& topo, const DrmOptions& opts) {
    topo.validate();  // CyclicTopology / DanglingPort / source+sink presence

    DrmProgram out;
    out.topology = topo;
    out.options = opts;

    SignalTable table;
    const auto& stages = topo.stages();
    const auto& edges = topo.edges();

    out.edge_signals.resize(edges.size());
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        const std::string up = stages[edges[e].up].name;
        const std::string down = stages[edges[e].down].name;
        auto& sig = out.edge_signals[e];
        sig.mark = table.declare("Mark_" + up + "2" + down, SignalKind::ValuedRange);
        sig.compute = table.declare("Compute_" + up + "2" + down, SignalKind::Pure);
        sig.ack = table.declare("Ack_" + down + "2" + up, SignalKind::ValuedRange);
        sig.take = table.declare("Take_" + down + "2" + up, SignalKind::Pure, true);
        sig.cancel = table.declare("Cancel_" + down + "2" + up, SignalKind::Pure, true);
    }
    out.stage_signals.resize(stages.size());
    for (std::uint32_t s = 0; s < stages.size(); ++s) {
        auto& sig = out.stage_signals[s];
        if (!topo.in_edges(s).empty())
            sig.ready = table.declare("Ready_" + stages[s].name, SignalKind::Pure);
        sig.err = table.declare("Err_" + stages[s].name, SignalKind::Pure);
        if (stages[s].kind == StageKind::Source && opts.source_data == SourceData::EnvDriven)
            sig.data = table.declare("Data_" + stages[s].name, SignalKind::Pure, true);
    }
    out.user_quit = table.declare("User_Quit", SignalKind::Pure, true);
    if (opts.boot == BootMode::AwaitIpAddr) {
        out.ip_addr = table.declare("IP_Addr", SignalKind::Pure, true);
        out.init_range_sig = table.declare("InitRange", SignalKind::ValuedRange, true);
        for (std::uint32_t s = 0; s < stages.size(); ++s) {
            std::string base = s < opts.module_names.size() ? opts.module_names[s]
                                                            : stages[s].name + "_module";
            out.module_signals.push_back(table.declare(base, SignalKind::Pure));
        }
    }

    // bootstrap ack payload
    SampleRange boot_range = opts.init_range.value_or(SampleRange{0, 0});
    if (boot_range.size == 0) {
        auto srcs = topo.sources();
        const auto& s0 = stages[srcs.front()];
        boot_range = s0.init_range.value_or(SampleRange{0, s0.source_frame()});
    }
    out.bootstrap_range = boot_range;

    // --- boot automaton -----------------------------------------------------
    std::vector<ControlAutomaton> automata;
    {
        ControlAutomaton boot("boot");
        boot.set_haltable(true);
        std::vector<Emission> acks;
        for (auto src : topo.sources()) {
            auto oes = topo.out_edges(src);
            acks.push_back(Emission{out.edge_signals[oes.front()].ack,
                                    opts.boot == BootMode::AwaitIpAddr
                                        ? PayloadSource::copy(out.init_range_sig)
                                        : PayloadSource::constant(boot_range)});
        }
        if (opts.boot == BootMode::Immediate) {
            auto b0 = boot.add_state("boot");
            auto b1 = boot.add_state("running");
            boot.set_initial(b0);
            boot.add_transition({b0, Guard::always(), acks, b1, {}});
        } else {
            auto w = boot.add_state("await_ip");
            auto c = boot.add_state("await_range");
            auto r = boot.add_state("running");
            boot.set_initial(w);
            std::vector<Emission> modules;
            for (auto m : out.module_signals) modules.push_back({m, PayloadSource::none()});
            boot.add_transition({w, Guard::present(out.ip_addr), modules, c, {}});
            boot.add_transition({c, Guard::present(out.init_range_sig), acks, r, {}});
        }
        automata.push_back(std::move(boot));
    }

    // --- per-stage protocol automata ----------------------------------------
    out.stage_automaton.resize(stages.size());
    out.stage_dims.resize(stages.size());
    const bool twotick = opts.cost == StageCost::TwoTick;

    for (std::uint32_t s = 0; s < stages.size(); ++s) {
        const auto& st = stages[s];
        auto ins = topo.in_edges(s);
        auto outs = topo.out_edges(s);
        const bool is_source = st.kind == StageKind::Source;
        const bool is_sink = st.kind == StageKind::Sink;
        const bool folded_out = opts.fold_out_stages.count(s) > 0;
        const bool rdv_here = opts.rdv == RdvPolicy::StartupHold && !ins.empty();
        const bool bug_receipt = opts.bugs.ack_on_receipt == s;
        const bool bug_drop_cancel = opts.bugs.drop_cancel == s;
        const bool bug_mute_ack = opts.bugs.mute_ack == s;

        StageDims dims;
        dims.has_m = twotick && !ins.empty();
        dims.has_p = !ins.empty();
        dims.credits = outs.empty() ? 0 : (folded_out ? 1 : static_cast<std::uint32_t>(outs.size()));
        dims.phases = twotick ? 2 + st.extra_compute_ticks : 1;
        dims.has_h = rdv_here;
        dims.initial_credits.assign(dims.credits, kCap);
        if (is_source && dims.credits > 0) dims.initial_credits[0] = kCap - 1;  // boot ack adds one

        StageGen gen;
        if (is_source) {
            if (opts.source_data == SourceData::EnvDriven) {
                gen.has_d = true;
                gen.events.push_back({out.stage_signals[s].data});
            }
        } else {
            std::vector<SignalId> marks, computes;
            for (auto e : ins) {
                marks.push_back(out.edge_signals[e].mark);
                computes.push_back(out.edge_signals[e].compute);
            }
            if (twotick) {
                gen.has_dm = true;
                gen.events.push_back(marks);
            }
            gen.has_dp = true;
            gen.events.push_back(computes);
        }
        if (dims.credits > 0) {
            if (folded_out) {
                std::vector<SignalId> acks;
                for (auto e : outs) acks.push_back(out.edge_signals[e].ack);
                gen.events.push_back(acks);
            } else {
                for (auto e : outs) gen.events.push_back({out.edge_signals[e].ack});
            }
            // a commit also waits for the receiver's readiness level, except
            // on an edge whose handshake the injection miswired
            auto gated = [&](std::uint32_t e) {
                return !(opts.bugs.ack_on_receipt &&
                         *opts.bugs.ack_on_receipt == edges[e].down);
            };
            if (folded_out) {
                std::vector<SignalId> readies;
                for (auto e : outs)
                    if (gated(e)) readies.push_back(out.stage_signals[edges[e].down].ready);
                if (!readies.empty()) {
                    gen.events.push_back(readies);
                    gen.gates = 1;
                }
            } else {
                for (auto e : outs) {
                    if (gated(e)) {
                        gen.events.push_back({out.stage_signals[edges[e].down].ready});
                        ++gen.gates;
                    }
                }
            }
        }
        const auto n_events = static_cast<std::uint32_t>(gen.events.size());

        ControlAutomaton automaton(st.name);
        automaton.set_suspendable(true);

        // enumerate full tuples, then BFS-prune to the reachable graph
        const std::uint32_t full_count = dims.tuple_count();

        struct RawTransition {
            std::uint32_t from_full, to_full;
            std::uint32_t mask;
            std::vector<Emission> emissions;
            Action action;
        };
        std::vector<RawTransition> raw;

        for (std::uint32_t full = 0; full < full_count; ++full) {
            std::uint32_t m, p, h, phase;
            std::vector<std::uint32_t> c;
            dims.decode_tuple(full, m, p, c, phase, h);
            for (std::uint32_t mask = 0; mask < (1u << n_events); ++mask) {
                bool d = false, dm = false, dp = false;
                std::uint32_t evi = 0;
                if (gen.has_d) d = (mask >> evi++) & 1;
                if (gen.has_dm) dm = (mask >> evi++) & 1;
                if (gen.has_dp) dp = (mask >> evi++) & 1;
                std::vector<std::uint32_t> a(dims.credits, 0);
                for (std::uint32_t i = 0; i < dims.credits; ++i) a[i] = (mask >> evi++) & 1;

                bool overflow = false;
                std::uint32_t m2 = m + (dm ? 1 : 0);
                if (m2 > kCap) {
                    m2 = kCap;
                    overflow = true;
                }
                std::uint32_t p2 = p + (dp ? 1 : 0);
                if (p2 > kCap) {
                    p2 = kCap;
                    overflow = true;
                }
                auto c2 = c;
                for (std::uint32_t i = 0; i < dims.credits; ++i) {
                    c2[i] += a[i];
                    if (c2[i] > kCap) {
                        c2[i] = kCap;
                        overflow = true;
                    }
                }

                std::uint32_t m3 = m2, p3 = p2, phase3 = phase, h3 = h;
                auto c3 = c2;
                std::vector<Emission> emissions;
                Action action;

                auto emit_marks = [&] {
                    for (auto e : outs)
                        emissions.push_back(
                            {out.edge_signals[e].mark, PayloadSource::from_hook(hook_planned(s))});
                };
                auto emit_commit = [&] {
                    for (auto e : outs)
                        emissions.push_back({out.edge_signals[e].compute, PayloadSource::none()});
                    if (!bug_mute_ack && !bug_receipt)
                        for (auto e : ins)
                            emissions.push_back({out.edge_signals[e].ack,
                                                 PayloadSource::from_hook(hook_consumed(s))});
                };

                bool all_credit = true;
                for (auto v : c3)
                    if (v == 0) all_credit = false;

                if (twotick) {
                    bool data_ok = is_source ? (!gen.has_d || d) : m2 > 0;
                    if (phase == 0 && data_ok) {
                        // estimating tick
                        if (!is_source) m3 = m2 - 1;
                        phase3 = dims.phases - 1;
                        emit_marks();
                        if (rdv_here && h == 0) {
                            for (auto e : ins)
                                emissions.push_back(
                                    {out.edge_signals[e].take, PayloadSource::none()});
                            h3 = 1;
                        }
                        action = {Action::Kind::Estimate, s};
                    } else if (phase > 1) {
                        phase3 = phase - 1;  // compute latency countdown
                    } else if (phase == 1 && (is_source || p2 > 0) && (is_sink || all_credit)) {
                        // committing tick
                        if (!is_source) p3 = p2 - 1;
                        for (auto& v : c3) --v;
                        phase3 = 0;
                        emit_commit();
                        if (rdv_here && h == 1) {
                            if (!bug_drop_cancel)
                                for (auto e : ins)
                                    emissions.push_back(
                                        {out.edge_signals[e].cancel, PayloadSource::none()});
                            h3 = 2;
                        }
                        action = {Action::Kind::Compute, s};
                    }
                } else {
                    bool fire = (is_source ? (!gen.has_d || d) : p2 > 0) && (is_sink || all_credit);
                    if (fire) {
                        if (!is_source) p3 = p2 - 1;
                        for (auto& v : c3) --v;
                        emit_marks();
                        emit_commit();
                        action = {Action::Kind::EstimateCompute, s};
                    }
                }

                if (bug_receipt && dp)
                    for (auto e : ins)
                        emissions.push_back({out.edge_signals[e].ack,
                                             PayloadSource::constant(SampleRange{0, 0})});
                if (!ins.empty() && p3 <= 1)
                    emissions.push_back({out.stage_signals[s].ready, PayloadSource::none()});
                if (overflow)
                    emissions.push_back({out.stage_signals[s].err, PayloadSource::none()});

                std::uint32_t to_full = dims.encode_tuple(m3, p3, c3, phase3, h3);
                raw.push_back({full, to_full, mask, std::move(emissions), action});
            }
        }

        // reachable pruning from the initial tuple
        std::uint32_t init_full =
            dims.encode_tuple(0, 0, dims.initial_credits, 0, dims.has_h ? 0 : 2);
        std::vector<std::vector<const RawTransition*>> by_from(full_count);
        for (const auto& t : raw) by_from[t.from_full].push_back(&t);
        std::vector<std::uint32_t> dense(full_count, UINT32_MAX);
        std::deque<std::uint32_t> frontier{init_full};
        std::vector<std::uint32_t> order;
        dense[init_full] = 0;
        order.push_back(init_full);
        while (!frontier.empty()) {
            auto f = frontier.front();
            frontier.pop_front();
            for (const auto* t : by_from[f]) {
                if (dense[t->to_full] == UINT32_MAX) {
                    dense[t->to_full] = static_cast<std::uint32_t>(order.size());
                    order.push_back(t->to_full);
                    frontier.push_back(t->to_full);
                }
            }
        }

        for (auto full : order) {
            std::uint32_t m, p, h, phase;
            std::vector<std::uint32_t> c;
            dims.decode_tuple(full, m, p, c, phase, h);
            std::string label = "m" + std::to_string(m) + "p" + std::to_string(p) + "c";
            for (auto v : c) label += std::to_string(v);
            label += "f" + std::to_string(phase) + "h" + std::to_string(h);
            automaton.add_state(label);
        }
        automaton.set_initial(0);

        for (const auto& t : raw) {
            if (dense[t.from_full] == UINT32_MAX) continue;
            // drop pure self-loop stalls with nothing to say
            if (t.from_full == t.to_full && t.emissions.empty() &&
                t.action.kind == Action::Kind::None)
                continue;
            std::vector<Guard> terms;
            for (std::uint32_t i = 0; i < n_events; ++i)
                terms.push_back(event_guard(gen.events[i], (t.mask >> i) & 1));
            Guard g = terms.empty() ? Guard::always() : Guard::all_of(std::move(terms));
            automaton.add_transition(
                {dense[t.from_full], g, t.emissions, dense[t.to_full], t.action});
        }

        dims.tuple_to_state = std::move(dense);
        dims.state_to_tuple = std::move(order);
        out.stage_dims[s] = std::move(dims);
        out.stage_automaton[s] = static_cast<std::uint32_t>(automata.size());
        automata.push_back(std::move(automaton));
    }

    out.program = declare_program(std::move(automata), std::move(table));
    out.program.set_halt_signal(out.user_quit);
    for (std::uint32_t e = 0; e < edges.size(); ++e)
        out.program.add_rendezvous({out.edge_signals[e].take, out.edge_signals[e].cancel,
                                    out.stage_automaton[edges[e].up]});
    return out;
}

void rendezvous_guard(DrmProgram& drm, std::uint32_t edge) {
    if (edge >= drm.edge_signals.size())
        raise(ErrorCode::BadConfig, "rendezvous_guard: no such edge");
    // bindings are installed at build; re-installation is a harmless no-op
    drm.program.add_rendezvous({drm.edge_signals[edge].take, drm.edge_signals[edge].cancel,
                                drm.stage_automaton[drm.topology.edges()[edge].up]});
}

PipelineRunner::PipelineRunner(DrmProgram drm, Dataplane dataplane)
    : drm_(std::move(drm)), dataplane_(std::move(dataplane)) {
    const auto n = drm_.topology.stages().size();
    run_.stages.resize(n);
    last_planned_.resize(n);
    last_consumed_.resize(n);
    drm_.program.bind_dataplane(this);
    for (auto e : drm_.options.inactive_edges) {
        dataplane_.set_edge_active(e, false);
        drm_.program.suspend(drm_.stage_automaton[drm_.topology.edges()[e].down]);
    }
}

void PipelineRunner::run_action(const Action& action, std::uint64_t) {
    switch (action.kind) {
        case Action::Kind::None: return;
        case Action::Kind::Estimate:
            last_planned_[action.stage] = dataplane_.estimate_auto(action.stage);
            ++run_.stages[action.stage].estimates;
            return;
        case Action::Kind::Compute: {
            auto pending = dataplane_.front_pending(action.stage);
            if (!pending)
                raise(ErrorCode::StaleRange, "compute fired with no planned frame on stage '" +
                                                 drm_.topology.stage(action.stage).name + "'");
            last_consumed_[action.stage] = pending->in;
            if (workers_ > 1)
                deferred_.emplace_back(action.stage, pending->out);
            else
                dataplane_.compute(action.stage, pending->out);
            ++run_.stages[action.stage].computes;
            return;
        }
        case Action::Kind::EstimateCompute: {
            auto planned = dataplane_.estimate_auto(action.stage);
            last_planned_[action.stage] = planned;
            ++run_.stages[action.stage].estimates;
            last_consumed_[action.stage] = dataplane_.front_pending(action.stage)->in;
            if (workers_ > 1)
                deferred_.emplace_back(action.stage, planned);
            else
                dataplane_.compute(action.stage, planned);
            ++run_.stages[action.stage].computes;
            return;
        }
    }
}

void PipelineRunner::flush_deferred() {
    if (deferred_.empty()) return;
    // stage transforms are pure and target disjoint connector regions, so
    // the batch can run concurrently
    std::vector<std::future<void>> tasks;
    tasks.reserve(deferred_.size());
    for (const auto& [stage, planned] : deferred_) {
        auto s = stage;
        auto out = planned;
        tasks.push_back(std::async(std::launch::async, [this, s, out] {
            dataplane_.compute(s, out);
        }));
    }
    for (auto& t : tasks) t.get();
    deferred_.clear();
}

Payload PipelineRunner::hook_payload(std::uint32_t hook_id) {
    auto stage = hook_id >> 1;
    return (hook_id & 1) ? Payload{last_consumed_.at(stage)} : Payload{last_planned_.at(stage)};
}

void PipelineRunner::apply_reaction(const Reaction& r) {
    for (const auto& ev : r.outputs) {
        for (std::uint32_t e = 0; e < drm_.edge_signals.size(); ++e) {
            if (ev.id == drm_.edge_signals[e].mark) {
                if (const auto* range = std::get_if<SampleRange>(&ev.value))
                    dataplane_.announce(e, *range);
            } else if (ev.id == drm_.edge_signals[e].ack) {
                ++run_.stages[drm_.topology.edges()[e].down].acks;
            }
        }
    }
    std::uint64_t produced = 0, consumed = 0;
    for (auto s : drm_.topology.sources()) produced += dataplane_.frames_computed(s);
    for (auto s : drm_.topology.sinks()) {
        auto before = consumed;
        consumed += dataplane_.frames_computed(s);
        (void)before;
    }
    if (consumed > run_.consumed) run_.ticks = r.tick;
    run_.produced = produced;
    run_.consumed = consumed;
    if (keep_reactions_) run_.reactions.push_back(r);
    trace_.write(r, drm_.program.signals());
}

void PipelineRunner::boot() {
    if (booted_ || drm_.options.boot != BootMode::AwaitIpAddr) {
        booted_ = true;
        return;
    }
    apply_reaction(drm_.program.react({}));
    apply_reaction(drm_.program.react({SignalEvent{drm_.ip_addr, {}, 0}}));
    apply_reaction(
        drm_.program.react({SignalEvent{drm_.init_range_sig, drm_.bootstrap_range, 0}}));
    booted_ = true;
}

Reaction PipelineRunner::step(const std::vector<std::pair<std::uint32_t, bool>>& available) {
    if (!booted_) boot();
    if (injected_.size() < drm_.topology.stages().size())
        injected_.assign(drm_.topology.stages().size(), 0);
    std::vector<SignalEvent> inputs;
    if (drm_.options.source_data == SourceData::EnvDriven) {
        for (auto src : drm_.topology.sources()) {
            const auto& st = drm_.topology.stage(src);
            std::uint64_t frame = st.source_frame();
            std::uint64_t frames = dataplane_.unplanned_window(src).size / frame;
            if (item_budget_) {
                std::uint64_t est = run_.stages[src].estimates;
                std::uint64_t left = *item_budget_ > est ? *item_budget_ - est : 0;
                frames = std::min(frames, left);
            }
            // an injection from the previous tick may still consume a frame
            // this tick; never promise more than the feed holds
            bool avail = frames >= 1 + (injected_[src] ? 1u : 0u);
            for (auto [stage, v] : available)
                if (stage == src) avail = v;
            injected_[src] = avail ? 1 : 0;
            if (avail)
                inputs.push_back(SignalEvent{drm_.stage_signals[src].data, {}, 0});
        }
    }
    auto r = drm_.program.react(inputs);
    flush_deferred();
    apply_reaction(r);
    return r;
}

const PipelineRun& PipelineRunner::run_items(std::uint64_t items, std::uint64_t max_ticks) {
    set_item_budget(items);
    if (!booted_) boot();
    for (std::uint64_t i = 0; i < max_ticks; ++i) {
        bool done = true;
        for (auto s : drm_.topology.sinks())
            if (dataplane_.frames_computed(s) < items) done = false;
        if (done) break;
        step();
    }
    return run_;
}

const PipelineRun& PipelineRunner::run_ticks(std::uint64_t ticks) {
    if (!booted_) boot();
    for (std::uint64_t i = 0; i < ticks; ++i) step();
    return run_;
}

void PipelineRunner::deactivate_path(std::uint32_t edge) {
    if (!dataplane_.edge_active(edge)) return;
    dataplane_.set_edge_active(edge, false);
    auto down = drm_.topology.edges()[edge].down;
    bool has_other_input = false;
    for (auto e : drm_.topology.in_edges(down))
        if (e != edge && dataplane_.edge_active(e)) has_other_input = true;
    // drop whatever the downstream had planned from this path
    while (auto pending = dataplane_.front_pending(down)) dataplane_.skip(down, pending->out);
    if (has_other_input) return;  // rejoin stage keeps running on its other path
    auto idx = drm_.stage_automaton[down];
    if (!drm_.program.is_suspended(idx)) drm_.program.suspend(idx);
    for (auto e : drm_.topology.out_edges(down)) deactivate_path(e);
}

void PipelineRunner::activate_path(std::uint32_t edge) {
    if (dataplane_.edge_active(edge)) return;
    const auto& topo_edge = drm_.topology.edges()[edge];
    dataplane_.set_edge_active(edge, true);
    dataplane_.reset_edge(edge, dataplane_.next_out(topo_edge.up));
    auto down = topo_edge.down;
    while (auto pending = dataplane_.front_pending(down)) dataplane_.skip(down, pending->out);
    dataplane_.reset_stage_input(down, dataplane_.next_out(topo_edge.up));
    // fresh control state: nothing heard, nothing pending, full credits
    const auto& dims = drm_.stage_dims[down];
    auto idx = drm_.stage_automaton[down];
    drm_.program.set_automaton_state(
        idx, dims.state_of(0, 0, dims.initial_credits, 0, dims.has_h ? 0 : 2));
    if (drm_.program.is_suspended(idx)) drm_.program.resume(idx);
    for (auto e : drm_.topology.out_edges(down)) activate_path(e);
}

void PipelineRunner::retopologize(const std::vector<std::uint32_t>& edges_out,
                                  const std::vector<std::uint32_t>& edges_in) {
    if (edges_out.empty() || edges_in.empty())
        raise(ErrorCode::BadConfig, "retopologize needs edges on both sides");
    const auto& edges = drm_.topology.edges();
    auto up = edges.at(edges_in.front()).up;
    for (auto e : edges_in)
        if (edges.at(e).up != up)
            raise(ErrorCode::BadConfig, "switched edges must share one upstream stage");
    for (auto e : edges_out)
        if (edges.at(e).up != up)
            raise(ErrorCode::BadConfig, "switched edges must share one upstream stage");
    const auto& up_stage = drm_.topology.stage(up);
    for (auto e : edges_in) {
        if (edges[e].rate != up_stage.out_rate ||
            edges[e].rate != drm_.topology.stage(edges[e].down).in_rate)
            raise(ErrorCode::IncompatibleRates,
                  "edge rate " + std::to_string(edges[e].rate) + " does not fit the switch");
    }
    bool noop = true;
    for (auto e : edges_in)
        if (!dataplane_.edge_active(e)) noop = false;
    for (auto e : edges_out)
        if (dataplane_.edge_active(e)) noop = false;
    if (noop) return;

    for (auto e : edges_out) deactivate_path(e);
    for (auto e : edges_in) activate_path(e);
}

}  // namespace tickflow
