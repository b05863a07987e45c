#pragma once

#include <cstdint>
#include <string>

namespace tickflow {

// Window into an unbounded sample stream: absolute start ordinal plus count.
// size == 0 marks a skipped range (consumed without computing).
struct SampleRange {
    std::uint64_t index = 0;
    std::uint64_t size = 0;

    constexpr std::uint64_t end() const { return index + size; }
    constexpr bool empty() const { return size == 0; }

    constexpr bool overlaps(const SampleRange& other) const {
        if (empty() || other.empty()) return false;
        return index < other.end() && other.index < end();
    }

    friend constexpr bool operator==(const SampleRange&, const SampleRange&) = default;
};

inline std::string to_string(const SampleRange& r) {
    return std::to_string(r.index) + ":" + std::to_string(r.size);
}

}  // namespace tickflow
