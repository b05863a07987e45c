#include "tickflow/signal.hpp"

#include <bit>

namespace tickflow {

std::string payload_to_string(const Payload& p) {
    if (std::holds_alternative<std::monostate>(p)) return "";
    if (const auto* r = std::get_if<SampleRange>(&p)) return to_string(*r);
    return std::to_string(std::get<std::int64_t>(p));
}

SignalId SignalTable::declare(const SignalDecl& decl) {
    if (by_name_.count(decl.name))
        raise(ErrorCode::DuplicateSignal, "signal '" + decl.name + "' declared twice");
    auto idx = static_cast<std::uint32_t>(decls_.size());
    decls_.push_back(decl);
    by_name_.emplace(decl.name, idx);
    return SignalId{idx};
}

SignalId SignalTable::lookup(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return SignalId{};
    return SignalId{it->second};
}

SignalId SignalTable::require(const std::string& name) const {
    SignalId id = lookup(name);
    if (!id.valid()) raise(ErrorCode::UnknownSignal, "no signal named '" + name + "'");
    return id;
}

std::size_t SignalSet::count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

void SignalSet::union_with(const SignalSet& other) {
    for (std::size_t i = 0; i < bits_.size() && i < other.bits_.size(); ++i)
        bits_[i] |= other.bits_[i];
}

void SignalSet::intersect_with(const SignalSet& other) {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        bits_[i] &= i < other.bits_.size() ? other.bits_[i] : 0;
}

bool SignalSet::is_subset_of(const SignalSet& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        std::uint64_t w = i < other.bits_.size() ? other.bits_[i] : 0;
        if (bits_[i] & ~w) return false;
    }
    return true;
}

std::vector<SignalId> SignalSet::members() const {
    std::vector<SignalId> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        std::uint64_t w = bits_[i];
        while (w) {
            auto b = static_cast<std::uint32_t>(std::countr_zero(w));
            out.push_back(SignalId{static_cast<std::uint32_t>(i * 64 + b)});
            w &= w - 1;
        }
    }
    return out;
}

}  // namespace tickflow
