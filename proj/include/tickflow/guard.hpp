#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tickflow/signal.hpp"

namespace tickflow {

// Boolean formula over signal presence. Atoms test the current tick's
// valuation or, via pre(), the previous tick's final valuation. Negation is
// legal only over subformulas whose atoms are all pre() atoms: current-tick
// presence can only be tested positively, which keeps a reaction's fixpoint
// monotone (signals only turn on within a tick).
class Guard {
  public:
    enum class Op : std::uint8_t { True, Present, Pre, Not, And, Or };

    static Guard always() { return Guard(Op::True); }
    static Guard present(SignalId id) { return atom(Op::Present, id); }
    static Guard pre(SignalId id) { return atom(Op::Pre, id); }
    static Guard negate(Guard g);
    static Guard all_of(std::vector<Guard> gs);
    static Guard any_of(std::vector<Guard> gs);

    Guard operator&&(const Guard& other) const { return all_of({*this, other}); }
    Guard operator||(const Guard& other) const { return any_of({*this, other}); }
    Guard operator!() const { return negate(*this); }

    Op op() const { return op_; }
    SignalId signal() const { return signal_; }
    const std::vector<Guard>& children() const { return children_; }

    bool eval(const SignalSet& current, const SignalSet& previous) const;

    // True when every atom under a Not is a pre() atom.
    bool monotone() const { return monotone_impl(false); }

    // Collects (signal, isPre) atoms, deduplicated.
    void atoms(std::vector<std::pair<SignalId, bool>>& out) const;

    std::string to_string(const SignalTable& table) const;

  private:
    explicit Guard(Op op) : op_(op) {}
    static Guard atom(Op op, SignalId id) {
        Guard g(op);
        g.signal_ = id;
        return g;
    }

    bool monotone_impl(bool under_not) const;

    Op op_ = Op::True;
    SignalId signal_;
    std::vector<Guard> children_;
};

// True when g1 and g2 cannot both hold under any assignment of their atoms.
// Decided by enumerating assignments over the union of the two atom sets;
// guards are small, so this stays cheap.
bool guards_mutually_exclusive(const Guard& g1, const Guard& g2, std::size_t universe);

}  // namespace tickflow
