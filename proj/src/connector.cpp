#include "tickflow/connector.hpp"

namespace tickflow {

void Connector::push(const SampleRange& range, const std::vector<std::uint8_t>& bytes) {
    if (range.empty()) return;  // skip marker: no bytes move
    if (range.index != write_)
        raise(ErrorCode::StaleRange, "write at " + std::to_string(range.index) +
                                         " but cursor is " + std::to_string(write_));
    if (range.size > free_space())
        raise(ErrorCode::BufferOverrun, "writing " + std::to_string(range.size) +
                                            " samples with only " + std::to_string(free_space()) +
                                            " free");
    if (bytes.size() != range.size * width_)
        raise(ErrorCode::WrongSampleWidth, "payload is " + std::to_string(bytes.size()) +
                                               " bytes, expected " +
                                               std::to_string(range.size * width_));
    for (std::uint64_t i = 0; i < range.size; ++i) {
        std::uint64_t slot = ((range.index + i) % capacity_) * width_;
        for (std::uint32_t b = 0; b < width_; ++b) storage_[slot + b] = bytes[i * width_ + b];
    }
    write_ = range.end();
}

std::vector<std::uint8_t> Connector::peek(const SampleRange& range) const {
    if (range.empty()) return {};
    if (range.index < read_ || range.end() > write_)
        raise(ErrorCode::InsufficientData,
              "range " + to_string(range) + " outside buffered window [" + std::to_string(read_) +
                  ", " + std::to_string(write_) + ")");
    std::vector<std::uint8_t> out(range.size * width_);
    for (std::uint64_t i = 0; i < range.size; ++i) {
        std::uint64_t slot = ((range.index + i) % capacity_) * width_;
        for (std::uint32_t b = 0; b < width_; ++b) out[i * width_ + b] = storage_[slot + b];
    }
    return out;
}

void Connector::consume_to(std::uint64_t upto) {
    if (upto < read_ || upto > write_)
        raise(ErrorCode::StaleRange, "consume to " + std::to_string(upto) + " outside [" +
                                         std::to_string(read_) + ", " + std::to_string(write_) +
                                         "]");
    read_ = upto;
}

}  // namespace tickflow
