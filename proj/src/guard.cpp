#include "tickflow/guard.hpp"

#include <algorithm>

namespace tickflow {

Guard Guard::negate(Guard g) {
    Guard out(Op::Not);
    out.children_.push_back(std::move(g));
    return out;
}

Guard Guard::all_of(std::vector<Guard> gs) {
    if (gs.size() == 1) return gs.front();
    Guard out(Op::And);
    out.children_ = std::move(gs);
    return out;
}

Guard Guard::any_of(std::vector<Guard> gs) {
    if (gs.size() == 1) return gs.front();
    Guard out(Op::Or);
    out.children_ = std::move(gs);
    return out;
}

bool Guard::eval(const SignalSet& current, const SignalSet& previous) const {
    switch (op_) {
        case Op::True: return true;
        case Op::Present: return current.contains(signal_);
        case Op::Pre: return previous.contains(signal_);
        case Op::Not: return !children_.front().eval(current, previous);
        case Op::And:
            for (const auto& c : children_)
                if (!c.eval(current, previous)) return false;
            return true;
        case Op::Or:
            for (const auto& c : children_)
                if (c.eval(current, previous)) return true;
            return false;
    }
    return false;
}

bool Guard::monotone_impl(bool under_not) const {
    switch (op_) {
        case Op::True: return true;
        case Op::Present: return !under_not;
        case Op::Pre: return true;
        case Op::Not: return children_.front().monotone_impl(true);
        case Op::And:
        case Op::Or:
            for (const auto& c : children_)
                if (!c.monotone_impl(under_not)) return false;
            return true;
    }
    return true;
}

void Guard::atoms(std::vector<std::pair<SignalId, bool>>& out) const {
    switch (op_) {
        case Op::True: return;
        case Op::Present:
        case Op::Pre: {
            std::pair<SignalId, bool> a{signal_, op_ == Op::Pre};
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
            return;
        }
        case Op::Not:
        case Op::And:
        case Op::Or:
            for (const auto& c : children_) c.atoms(out);
            return;
    }
}

std::string Guard::to_string(const SignalTable& table) const {
    switch (op_) {
        case Op::True: return "true";
        case Op::Present: return table.name(signal_);
        case Op::Pre: return "pre(" + table.name(signal_) + ")";
        case Op::Not: return "!(" + children_.front().to_string(table) + ")";
        case Op::And:
        case Op::Or: {
            std::string sep = op_ == Op::And ? " and " : " or ";
            std::string out = "(";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) out += sep;
                out += children_[i].to_string(table);
            }
            return out + ")";
        }
    }
    return "?";
}

bool guards_mutually_exclusive(const Guard& g1, const Guard& g2, std::size_t universe) {
    std::vector<std::pair<SignalId, bool>> atoms;
    g1.atoms(atoms);
    g2.atoms(atoms);
    // Beyond ~20 atoms enumeration would blow up; guards in this codebase
    // stay far below that.
    if (atoms.size() > 20) return false;
    SignalSet current(universe), previous(universe);
    const std::uint64_t limit = std::uint64_t{1} << atoms.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        current.clear();
        previous.clear();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (!((mask >> i) & 1)) continue;
            if (atoms[i].second)
                previous.insert(atoms[i].first);
            else
                current.insert(atoms[i].first);
        }
        if (g1.eval(current, previous) && g2.eval(current, previous)) return false;
    }
    return true;
}

}  // namespace tickflow
