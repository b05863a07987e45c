#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tickflow/automaton.hpp"
#include "tickflow/signal.hpp"

namespace tickflow {

// One synchronous tick: the inputs fed in, everything emitted in response,
// and the number of fixpoint micro-steps the reaction took.
struct Reaction {
    std::uint64_t tick = 0;
    std::vector<SignalEvent> inputs;
    std::vector<SignalEvent> outputs;
    std::uint32_t micro_steps = 0;

    bool emitted(SignalId id) const {
        for (const auto& e : outputs)
            if (e.id == id) return true;
        return false;
    }
    std::optional<Payload> output_value(SignalId id) const {
        for (const auto& e : outputs)
            if (e.id == id) return e.value;
        return std::nullopt;
    }
};

// Host-side binding that supplies dataplane behavior to a running program.
// Absent a binding (the verifier's case), actions are skipped and hook
// payloads collapse to defaults.
class DataplaneBinding {
  public:
    virtual ~DataplaneBinding() = default;
    virtual void run_action(const Action& action, std::uint64_t tick) = 0;
    virtual Payload hook_payload(std::uint32_t hook_id) = 0;
};

// Captured control state: automaton states, suspension flags, and the slice
// of the previous tick's valuation that pre() guards can observe. The tick
// ordinal is carried along for replay but ignored by equality/hashing.
struct GlobalState {
    std::vector<std::uint32_t> states;
    std::vector<std::uint8_t> suspended;
    SignalSet previous;  // masked to pre()-referenced signals
    std::uint64_t tick = 0;
    bool halted = false;

    bool same_configuration(const GlobalState& o) const {
        return states == o.states && suspended == o.suspended && previous == o.previous &&
               halted == o.halted;
    }
    std::size_t hash() const;
    std::string key() const;  // compact byte string usable as a map key
};

struct RendezvousBinding {
    SignalId take;
    SignalId cancel;
    std::uint32_t target_automaton;  // suspended while the handshake holds
};

// A closed synchronous program: a set of control automata over one signal
// table, driven tick by tick through react().
class Program {
  public:
    Program() = default;  // empty shell, filled by declare_program
    Program(std::vector<ControlAutomaton> automata, SignalTable table);

    const SignalTable& signals() const { return table_; }
    const std::vector<ControlAutomaton>& automata() const { return automata_; }
    std::uint32_t automaton_index(const std::string& name) const;
    std::uint64_t tick() const { return tick_; }
    bool halted() const { return halted_; }

    // Program-wide abort: when this signal occurs, every haltable automaton
    // stops reacting from the next tick on.
    void set_halt_signal(SignalId id) { halt_signal_ = id; }
    SignalId halt_signal() const { return halt_signal_; }

    void bind_dataplane(DataplaneBinding* binding) { dataplane_ = binding; }
    void add_rendezvous(RendezvousBinding rdv);
    const std::vector<RendezvousBinding>& rendezvous() const { return rendezvous_; }

    Reaction react(const std::vector<SignalEvent>& inputs);

    void suspend(std::uint32_t automaton);
    void resume(std::uint32_t automaton);
    bool is_suspended(std::uint32_t automaton) const { return suspended_.at(automaton) != 0; }

    GlobalState snapshot() const;
    void restore(const GlobalState& state);

    std::uint32_t current_state(std::uint32_t automaton) const { return states_.at(automaton); }

    // Direct state override (path switching resets a stage's protocol state).
    void set_automaton_state(std::uint32_t automaton, std::uint32_t state);

  private:
    void check_input(const SignalEvent& ev) const;
    void add_emission(SignalId id, const Payload& payload, SignalSet& valuation,
                      PayloadMap& payloads) const;

    std::vector<ControlAutomaton> automata_;
    SignalTable table_;
    std::vector<std::uint32_t> states_;
    std::vector<std::uint8_t> suspended_;
    SignalSet previous_valuation_;
    SignalSet pre_mask_;  // signals observable through pre()
    std::vector<RendezvousBinding> rendezvous_;
    SignalId halt_signal_;
    bool halted_ = false;
    std::uint64_t tick_ = 0;
    DataplaneBinding* dataplane_ = nullptr;
};

// Builds a program after validating every automaton against the table.
Program declare_program(std::vector<ControlAutomaton> automata, SignalTable table);

}  // namespace tickflow
