#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tickflow/errors.hpp"
#include "tickflow/range.hpp"

namespace tickflow {

enum class SignalKind : std::uint8_t { Pure, ValuedRange, ValuedInt };

// monostate for pure signals; payload present iff the kind is valued.
using Payload = std::variant<std::monostate, SampleRange, std::int64_t>;

std::string payload_to_string(const Payload& p);

// Dense handle into a SignalTable.
struct SignalId {
    std::uint32_t value = UINT32_MAX;
    constexpr bool valid() const { return value != UINT32_MAX; }
    friend constexpr bool operator==(const SignalId&, const SignalId&) = default;
};

struct SignalDecl {
    std::string name;
    SignalKind kind = SignalKind::Pure;
    bool environment_input = false;
};

// Interns signal declarations; names are unique per program.
class SignalTable {
  public:
    SignalId declare(const SignalDecl& decl);
    SignalId declare(const std::string& name, SignalKind kind = SignalKind::Pure,
                     bool environment_input = false) {
        return declare(SignalDecl{name, kind, environment_input});
    }

    SignalId lookup(const std::string& name) const;           // invalid id if absent
    SignalId require(const std::string& name) const;          // throws UnknownSignal
    const SignalDecl& decl(SignalId id) const { return decls_.at(id.value); }
    const std::string& name(SignalId id) const { return decls_.at(id.value).name; }
    SignalKind kind(SignalId id) const { return decls_.at(id.value).kind; }
    bool is_input(SignalId id) const { return decls_.at(id.value).environment_input; }
    std::size_t size() const { return decls_.size(); }

  private:
    std::vector<SignalDecl> decls_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
};

// Set of present signals within one tick, as a bitset over a SignalTable.
class SignalSet {
  public:
    SignalSet() = default;
    explicit SignalSet(std::size_t universe) : bits_((universe + 63) / 64, 0) {}

    void resize(std::size_t universe) { bits_.assign((universe + 63) / 64, 0); }
    void insert(SignalId id) { bits_[id.value >> 6] |= (std::uint64_t{1} << (id.value & 63)); }
    void erase(SignalId id) { bits_[id.value >> 6] &= ~(std::uint64_t{1} << (id.value & 63)); }
    bool contains(SignalId id) const {
        return (bits_[id.value >> 6] >> (id.value & 63)) & 1;
    }
    void clear() { for (auto& w : bits_) w = 0; }

    bool empty() const {
        for (auto w : bits_) if (w) return false;
        return true;
    }
    std::size_t count() const;

    void union_with(const SignalSet& other);
    void intersect_with(const SignalSet& other);
    bool is_subset_of(const SignalSet& other) const;

    // Ascending signal ids of the present bits.
    std::vector<SignalId> members() const;

    const std::vector<std::uint64_t>& words() const { return bits_; }

    friend bool operator==(const SignalSet&, const SignalSet&) = default;

  private:
    std::vector<std::uint64_t> bits_;
};

struct SignalSetHash {
    std::size_t operator()(const SignalSet& s) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto w : s.words()) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

// One present signal instance within a tick.
struct SignalEvent {
    SignalId id;
    Payload value;
    std::uint64_t tick = 0;
};

// Sparse payload storage alongside a SignalSet valuation.
using PayloadMap = std::unordered_map<std::uint32_t, Payload>;

}  // namespace tickflow
