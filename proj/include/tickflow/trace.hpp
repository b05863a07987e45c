#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tickflow/program.hpp"

namespace tickflow {

// One reaction per line:
//   tick=<n> in=<sig[,...]> out=<sig[=value][,...]> steps=<k>
// Names are listed in ascending lexicographic order; valued signals append
// "=<payload>" with SampleRange payloads rendered as index:size.
std::string format_reaction(const Reaction& reaction, const SignalTable& table);

struct TraceLine {
    std::uint64_t tick = 0;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> outputs;  // name, payload text ("" if pure)
    std::uint32_t steps = 0;
};

TraceLine parse_trace_line(const std::string& line);

// Per-run summary: stages=<n> ticks=<t> produced=<p> consumed=<c>
struct RunSummary {
    std::size_t stages = 0;
    std::uint64_t ticks = 0;
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
};

std::string format_summary(const RunSummary& s);

// Appends formatted reactions to a stream; null stream is a no-op sink.
class TraceWriter {
  public:
    TraceWriter() = default;
    explicit TraceWriter(std::ostream* out) : out_(out) {}
    void write(const Reaction& reaction, const SignalTable& table);
    std::uint64_t lines() const { return lines_; }

  private:
    std::ostream* out_ = nullptr;
    std::uint64_t lines_ = 0;
};

}  // namespace tickflow
