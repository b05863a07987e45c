#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tickflow/guard.hpp"
#include "tickflow/signal.hpp"

namespace tickflow {

// Where an emission's payload comes from when its transition fires.
// Fixed: constant payload. Copy: payload of another signal present this
// tick. Hook: supplied by the host's dataplane binding (pure presence when
// no binding is attached, e.g. during state-space enumeration).
struct PayloadSource {
    enum class Kind : std::uint8_t { None, Fixed, Copy, Hook } kind = Kind::None;
    Payload fixed;
    SignalId copy_from;
    std::uint32_t hook = 0;

    static PayloadSource none() { return {}; }
    static PayloadSource constant(Payload p) {
        PayloadSource s;
        s.kind = Kind::Fixed;
        s.fixed = std::move(p);
        return s;
    }
    static PayloadSource copy(SignalId from) {
        PayloadSource s;
        s.kind = Kind::Copy;
        s.copy_from = from;
        return s;
    }
    static PayloadSource from_hook(std::uint32_t hook_id) {
        PayloadSource s;
        s.kind = Kind::Hook;
        s.hook = hook_id;
        return s;
    }
};

struct Emission {
    SignalId signal;
    PayloadSource value;
};

// Dataplane work attached to a transition; interpreted by the host binding.
struct Action {
    enum class Kind : std::uint8_t { None, Estimate, Compute, EstimateCompute } kind = Kind::None;
    std::uint32_t stage = 0;
};

struct Transition {
    std::uint32_t from = 0;
    Guard guard = Guard::always();
    std::vector<Emission> emissions;
    std::uint32_t to = 0;
    Action action;
};

// Guarded finite automaton: the unit of control-plane composition. At most
// one transition fires per tick; when no guard holds the state is kept and
// nothing is emitted.
class ControlAutomaton {
  public:
    explicit ControlAutomaton(std::string name) : name_(std::move(name)) {}

    std::uint32_t add_state(std::string label);
    void set_initial(std::uint32_t state) { initial_ = state; }
    void add_transition(Transition t) { transitions_.push_back(std::move(t)); }
    void set_suspendable(bool v) { suspendable_ = v; }
    // Halt-group automata die when the program's halt signal occurs.
    void set_haltable(bool v) { haltable_ = v; }

    const std::string& name() const { return name_; }
    std::size_t state_count() const { return state_labels_.size(); }
    const std::string& state_label(std::uint32_t s) const { return state_labels_.at(s); }
    std::uint32_t initial() const { return initial_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    bool suspendable() const { return suspendable_; }
    bool haltable() const { return haltable_; }

    // Checks determinism, guard monotonicity, guard signal validity and
    // state reachability. Throws on the first defect found.
    void validate(const SignalTable& table) const;

  private:
    std::string name_;
    std::vector<std::string> state_labels_;
    std::uint32_t initial_ = 0;
    std::vector<Transition> transitions_;
    bool suspendable_ = false;
    bool haltable_ = true;
};

}  // namespace tickflow
