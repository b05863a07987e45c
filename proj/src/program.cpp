#include "tickflow/program.hpp"

#include <algorithm>

namespace tickflow {

std::size_t GlobalState::hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ull;
    };
    for (auto s : states) mix(s);
    for (auto s : suspended) mix(s + 0x9eull);
    for (auto w : previous.words()) mix(w);
    mix(halted ? 1 : 0);
    return h;
}

std::string GlobalState::key() const {
    std::string out;
    out.reserve(states.size() * 4 + suspended.size() + previous.words().size() * 8 + 1);
    auto put32 = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    for (auto s : states) put32(s);
    for (auto s : suspended) out.push_back(static_cast<char>(s));
    for (auto w : previous.words()) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((w >> (8 * i)) & 0xff));
    }
    out.push_back(halted ? 1 : 0);
    return out;
}

Program::Program(std::vector<ControlAutomaton> automata, SignalTable table)
    : automata_(std::move(automata)), table_(std::move(table)) {
    states_.resize(automata_.size());
    suspended_.assign(automata_.size(), 0);
    for (std::size_t i = 0; i < automata_.size(); ++i) states_[i] = automata_[i].initial();
    previous_valuation_.resize(table_.size());
    pre_mask_.resize(table_.size());
    std::vector<std::pair<SignalId, bool>> atoms;
    for (const auto& a : automata_)
        for (const auto& t : a.transitions()) t.guard.atoms(atoms);
    for (auto [sig, is_pre] : atoms)
        if (is_pre) pre_mask_.insert(sig);
}

Program declare_program(std::vector<ControlAutomaton> automata, SignalTable table) {
    for (const auto& a : automata) a.validate(table);
    return Program(std::move(automata), std::move(table));
}

std::uint32_t Program::automaton_index(const std::string& name) const {
    for (std::size_t i = 0; i < automata_.size(); ++i)
        if (automata_[i].name() == name) return static_cast<std::uint32_t>(i);
    raise(ErrorCode::UnknownSignal, "no automaton named '" + name + "'");
}

void Program::add_rendezvous(RendezvousBinding rdv) {
    if (!rdv.take.valid() || rdv.take.value >= table_.size() || !rdv.cancel.valid() ||
        rdv.cancel.value >= table_.size())
        raise(ErrorCode::UnknownSignal, "rendezvous binding references undeclared signals");
    if (rdv.target_automaton >= automata_.size())
        raise(ErrorCode::UnknownSignal, "rendezvous binding targets unknown automaton");
    if (!automata_[rdv.target_automaton].suspendable())
        raise(ErrorCode::NotSuspendable,
              "rendezvous target '" + automata_[rdv.target_automaton].name() +
                  "' is not suspendable");
    rendezvous_.push_back(rdv);
}

void Program::check_input(const SignalEvent& ev) const {
    if (!ev.id.valid() || ev.id.value >= table_.size())
        raise(ErrorCode::UnknownSignal, "input references an undeclared signal");
    const auto& decl = table_.decl(ev.id);
    if (!decl.environment_input)
        raise(ErrorCode::UnknownSignal, "signal '" + decl.name + "' is not an environment input");
    switch (decl.kind) {
        case SignalKind::Pure:
            if (!std::holds_alternative<std::monostate>(ev.value))
                raise(ErrorCode::ConflictingValuedEmission,
                      "pure signal '" + decl.name + "' fed with a payload");
            break;
        case SignalKind::ValuedRange:
            if (!std::holds_alternative<SampleRange>(ev.value))
                raise(ErrorCode::ConflictingValuedEmission,
                      "signal '" + decl.name + "' expects a SampleRange payload");
            break;
        case SignalKind::ValuedInt:
            if (!std::holds_alternative<std::int64_t>(ev.value))
                raise(ErrorCode::ConflictingValuedEmission,
                      "signal '" + decl.name + "' expects an integer payload");
            break;
    }
}

void Program::add_emission(SignalId id, const Payload& payload, SignalSet& valuation,
                           PayloadMap& payloads) const {
    if (valuation.contains(id)) {
        if (table_.kind(id) == SignalKind::Pure) return;  // idempotent
        auto it = payloads.find(id.value);
        Payload existing = it == payloads.end() ? Payload{} : it->second;
        if (existing == payload) return;  // idempotent re-emission
        raise(ErrorCode::ConflictingValuedEmission,
              "signal '" + table_.name(id) + "' emitted twice with different payloads (" +
                  payload_to_string(existing) + " vs " + payload_to_string(payload) + ")");
    }
    valuation.insert(id);
    if (table_.kind(id) != SignalKind::Pure) payloads[id.value] = payload;
}

Reaction Program::react(const std::vector<SignalEvent>& inputs) {
    SignalSet valuation(table_.size());
    SignalSet emitted(table_.size());
    PayloadMap payloads;

    for (const auto& ev : inputs) {
        check_input(ev);
        add_emission(ev.id, ev.value, valuation, payloads);
    }

    std::vector<std::uint8_t> fired(automata_.size(), 0);
    std::vector<const Transition*> chosen(automata_.size(), nullptr);
    const std::uint32_t cap = static_cast<std::uint32_t>(table_.size()) + 1;
    std::uint32_t steps = 0;

    while (true) {
        // Evaluate every idle automaton against the valuation frozen at the
        // top of the round, so micro-step counts do not depend on
        // declaration order.
        std::vector<std::uint32_t> now_firing;
        for (std::uint32_t i = 0; i < automata_.size(); ++i) {
            if (fired[i] || suspended_[i]) continue;
            if (halted_ && automata_[i].haltable()) continue;
            for (const auto& t : automata_[i].transitions()) {
                if (t.from != states_[i]) continue;
                if (t.guard.eval(valuation, previous_valuation_)) {
                    chosen[i] = &t;
                    now_firing.push_back(i);
                    break;
                }
            }
        }
        if (now_firing.empty()) break;
        if (++steps > cap)
            raise(ErrorCode::FixpointDivergence,
                  "reaction exceeded " + std::to_string(cap) + " micro-steps");
        for (auto i : now_firing) {
            fired[i] = 1;
            const Transition* t = chosen[i];
            if (dataplane_ && t->action.kind != Action::Kind::None)
                dataplane_->run_action(t->action, tick_);
            for (const auto& e : t->emissions) {
                Payload p;
                switch (e.value.kind) {
                    case PayloadSource::Kind::None: break;
                    case PayloadSource::Kind::Fixed: p = e.value.fixed; break;
                    case PayloadSource::Kind::Copy: {
                        auto it = payloads.find(e.value.copy_from.value);
                        if (it != payloads.end()) p = it->second;
                        break;
                    }
                    case PayloadSource::Kind::Hook:
                        if (dataplane_) p = dataplane_->hook_payload(e.value.hook);
                        break;
                }
                // Valued signals always carry a payload of their kind, even
                // when the source could not provide one.
                if (table_.kind(e.signal) == SignalKind::ValuedRange &&
                    !std::holds_alternative<SampleRange>(p))
                    p = SampleRange{};
                if (table_.kind(e.signal) == SignalKind::ValuedInt &&
                    !std::holds_alternative<std::int64_t>(p))
                    p = std::int64_t{0};
                add_emission(e.signal, p, valuation, payloads);
                emitted.insert(e.signal);
            }
        }
    }

    // Commit all state changes simultaneously.
    for (std::uint32_t i = 0; i < automata_.size(); ++i)
        if (fired[i]) states_[i] = chosen[i]->to;

    // Rendezvous handshakes latch suspension for the next tick; a cancel in
    // the same tick as a take wins.
    for (const auto& rdv : rendezvous_)
        if (valuation.contains(rdv.take)) suspended_[rdv.target_automaton] = 1;
    for (const auto& rdv : rendezvous_)
        if (valuation.contains(rdv.cancel)) suspended_[rdv.target_automaton] = 0;

    if (halt_signal_.valid() && valuation.contains(halt_signal_)) halted_ = true;

    Reaction reaction;
    reaction.tick = tick_;
    reaction.micro_steps = steps;
    for (const auto& ev : inputs)
        reaction.inputs.push_back(SignalEvent{ev.id, ev.value, tick_});
    for (auto id : emitted.members()) {
        auto it = payloads.find(id.value);
        reaction.outputs.push_back(
            SignalEvent{id, it == payloads.end() ? Payload{} : it->second, tick_});
    }

    previous_valuation_ = valuation;
    previous_valuation_.intersect_with(pre_mask_);
    ++tick_;
    return reaction;
}

void Program::suspend(std::uint32_t automaton) {
    if (automaton >= automata_.size())
        raise(ErrorCode::UnknownSignal, "suspend: unknown automaton index");
    if (!automata_[automaton].suspendable())
        raise(ErrorCode::NotSuspendable,
              "automaton '" + automata_[automaton].name() + "' is not suspendable");
    suspended_[automaton] = 1;
}

void Program::resume(std::uint32_t automaton) {
    if (automaton >= automata_.size())
        raise(ErrorCode::UnknownSignal, "resume: unknown automaton index");
    if (!suspended_[automaton])
        raise(ErrorCode::NotSuspended,
              "automaton '" + automata_[automaton].name() + "' is not suspended");
    suspended_[automaton] = 0;
}

void Program::set_automaton_state(std::uint32_t automaton, std::uint32_t state) {
    if (automaton >= automata_.size() || state >= automata_[automaton].state_count())
        raise(ErrorCode::IncompatibleSnapshot, "state override out of range");
    states_[automaton] = state;
}

GlobalState Program::snapshot() const {
    GlobalState s;
    s.states = states_;
    s.suspended = suspended_;
    s.previous = previous_valuation_;
    s.tick = tick_;
    s.halted = halted_;
    return s;
}

void Program::restore(const GlobalState& state) {
    if (state.states.size() != automata_.size() || state.suspended.size() != automata_.size())
        raise(ErrorCode::IncompatibleSnapshot, "snapshot shape does not match program");
    for (std::size_t i = 0; i < automata_.size(); ++i)
        if (state.states[i] >= automata_[i].state_count())
            raise(ErrorCode::IncompatibleSnapshot,
                  "snapshot state out of range for automaton '" + automata_[i].name() + "'");
    if (state.previous.words().size() != previous_valuation_.words().size())
        raise(ErrorCode::IncompatibleSnapshot, "snapshot valuation width mismatch");
    states_ = state.states;
    suspended_ = state.suspended;
    previous_valuation_ = state.previous;
    tick_ = state.tick;
    halted_ = state.halted;
}

}  // namespace tickflow
