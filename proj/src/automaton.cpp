#include "tickflow/automaton.hpp"

#include <deque>

namespace tickflow {

std::uint32_t ControlAutomaton::add_state(std::string label) {
    state_labels_.push_back(std::move(label));
    return static_cast<std::uint32_t>(state_labels_.size() - 1);
}

void ControlAutomaton::validate(const SignalTable& table) const {
    if (state_labels_.empty())
        raise(ErrorCode::UnreachableState, "automaton '" + name_ + "' has no states");

    std::vector<std::vector<const Transition*>> by_state(state_labels_.size());
    for (const auto& t : transitions_) {
        if (t.from >= state_labels_.size() || t.to >= state_labels_.size())
            raise(ErrorCode::UnreachableState,
                  "automaton '" + name_ + "' references an undeclared state");
        if (!t.guard.monotone())
            raise(ErrorCode::NonMonotoneGuard,
                  "automaton '" + name_ + "': current-tick presence negated in guard " +
                      t.guard.to_string(table));
        std::vector<std::pair<SignalId, bool>> atoms;
        t.guard.atoms(atoms);
        for (auto [sig, is_pre] : atoms) {
            (void)is_pre;
            if (!sig.valid() || sig.value >= table.size())
                raise(ErrorCode::UnknownSignalInGuard,
                      "automaton '" + name_ + "' guards an undeclared signal");
        }
        for (const auto& e : t.emissions) {
            if (!e.signal.valid() || e.signal.value >= table.size())
                raise(ErrorCode::UnknownSignal,
                      "automaton '" + name_ + "' emits an undeclared signal");
        }
        by_state[t.from].push_back(&t);
    }

    for (std::uint32_t s = 0; s < by_state.size(); ++s) {
        const auto& ts = by_state[s];
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j)
                if (!guards_mutually_exclusive(ts[i]->guard, ts[j]->guard, table.size()))
                    raise(ErrorCode::NondeterministicAutomaton,
                          "automaton '" + name_ + "' state '" + state_labels_[s] +
                              "': overlapping guards " + ts[i]->guard.to_string(table) +
                              " and " + ts[j]->guard.to_string(table));
    }

    // reachability over the transition graph, guards treated as satisfiable
    std::vector<bool> seen(state_labels_.size(), false);
    std::deque<std::uint32_t> frontier{initial_};
    seen[initial_] = true;
    while (!frontier.empty()) {
        auto s = frontier.front();
        frontier.pop_front();
        for (const Transition* t : by_state[s]) {
            if (!seen[t->to]) {
                seen[t->to] = true;
                frontier.push_back(t->to);
            }
        }
    }
    for (std::uint32_t s = 0; s < seen.size(); ++s)
        if (!seen[s])
            raise(ErrorCode::UnreachableState, "automaton '" + name_ + "' state '" +
                                                   state_labels_[s] + "' unreachable from initial");
}

}  // namespace tickflow
