#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tickflow/dataplane.hpp"
#include "tickflow/trace.hpp"

namespace tickflow {

// One demand in the pull chain.
struct PullRequest {
    std::uint32_t requester = 0;
    SampleRange range;
    std::uint32_t depth = 0;
};

// Demand-driven (lazy) scheduler: a pull at a sink recursively demands
// upstream frames; each stage computes a range exactly once and later pulls
// of the same range are served from buffer. Strictly sequential: one stage
// compute per tick, no interleaving between items.
class DpmScheduler {
  public:
    explicit DpmScheduler(const Topology& topo);

    Dataplane& dataplane() { return dataplane_; }
    void set_trace(std::ostream* out) { trace_ = TraceWriter(out); }

    // Returns the sink's bytes for `want`, computing exactly the frames no
    // earlier pull has produced.
    std::vector<std::uint8_t> pull(std::uint32_t sink, const SampleRange& want);

    std::uint64_t ticks() const { return ticks_; }
    const std::vector<PullRequest>& request_log() const { return requests_; }
    RunSummary summary() const;

  private:
    // Ensures the stage has produced output samples up to `upto`.
    void ensure_produced(std::uint32_t stage, std::uint64_t upto, std::uint32_t depth);
    std::uint64_t produced_out(std::uint32_t stage) const;

    Dataplane dataplane_;
    SignalTable pull_signals_;
    std::vector<SignalId> pull_signal_of_stage_;
    TraceWriter trace_;
    std::vector<PullRequest> requests_;
    std::uint64_t ticks_ = 0;
};

struct SchedulerComparison {
    std::uint64_t dpm_ticks = 0;
    std::uint64_t drm_ticks = 0;
    bool outputs_identical = false;
};

// Runs the same topology and feed under both schedulers and compares sink
// bytes; throws OutputDivergence when they disagree.
SchedulerComparison compare_schedulers(const Topology& topo, std::uint64_t items,
                                       std::uint64_t seed = 1);

}  // namespace tickflow
