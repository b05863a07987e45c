#pragma once

#include <cstdint>
#include <vector>

namespace tickflow::gsm {

// Bit vectors are byte-per-bit (values 0/1) throughout the chain.
using BitVec = std::vector<std::uint8_t>;

inline std::uint32_t hamming(const BitVec& a, const BitVec& b) {
    std::uint32_t d = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace tickflow::gsm
