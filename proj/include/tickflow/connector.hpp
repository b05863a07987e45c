#pragma once

#include <cstdint>
#include <vector>

#include "tickflow/errors.hpp"
#include "tickflow/range.hpp"

namespace tickflow {

// Byte-addressed ring buffer between two stages. Cursors are absolute
// sample ordinals; readCursor <= writeCursor <= readCursor + capacity at all
// times. Single producer, single consumer.
class Connector {
  public:
    Connector() = default;
    Connector(std::uint64_t capacity_samples, std::uint64_t rate, std::uint32_t sample_width)
        : capacity_(capacity_samples), rate_(rate), width_(sample_width),
          storage_(capacity_samples * sample_width) {}

    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t rate() const { return rate_; }
    std::uint32_t sample_width() const { return width_; }
    std::uint64_t read_cursor() const { return read_; }
    std::uint64_t write_cursor() const { return write_; }
    std::uint64_t available() const { return write_ - read_; }
    std::uint64_t free_space() const { return capacity_ - (write_ - read_); }

    // Writes one produced range at the write cursor. The range must start
    // exactly at the cursor; bytes.size() must equal size * width.
    void push(const SampleRange& range, const std::vector<std::uint8_t>& bytes);

    // Reads a range that has been produced and not yet consumed.
    std::vector<std::uint8_t> peek(const SampleRange& range) const;

    // Marks samples up to `upto` as consumed.
    void consume_to(std::uint64_t upto);

    // Restarts the stream at an arbitrary ordinal (path switching).
    void reset_to(std::uint64_t position) { read_ = write_ = position; }

    bool cursors_sane() const { return read_ <= write_ && write_ - read_ <= capacity_; }

  private:
    std::uint64_t capacity_ = 0;
    std::uint64_t rate_ = 0;
    std::uint32_t width_ = 1;
    std::uint64_t read_ = 0;
    std::uint64_t write_ = 0;
    std::vector<std::uint8_t> storage_;
};

}  // namespace tickflow
