#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tickflow/connector.hpp"
#include "tickflow/topology.hpp"

namespace tickflow {

// A frame planned by estimate() and not yet computed.
struct PlannedFrame {
    SampleRange in;   // input-side range (source: stream range)
    SampleRange out;  // output-side range (sink: == consumed range)
};

// Runtime state for one topology: connectors per edge, per-stage estimator
// cursors, source feeds and sink captures. Both schedulers drive their
// stages through this object, which is what makes their byte outputs
// comparable.
class Dataplane {
  public:
    explicit Dataplane(const Topology& topo);

    const Topology& topology() const { return topo_; }
    Connector& connector(std::uint32_t edge) { return connectors_.at(edge); }
    const Connector& connector(std::uint32_t edge) const { return connectors_.at(edge); }

    // Source input stream, given as raw bytes (in_width-sized samples).
    void feed_source(std::uint32_t stage, const std::vector<std::uint8_t>& bytes);
    std::uint64_t source_samples_available(std::uint32_t stage) const;
    const std::vector<std::uint8_t>& sink_capture(std::uint32_t stage) const;

    // True when the stage could estimate its next frame right now.
    bool frame_ready(std::uint32_t stage) const;

    // Plans the stage's next frame inside the given upstream window and
    // returns the planned output range. Consecutive plans are disjoint and
    // index-monotone.
    SampleRange estimate(std::uint32_t stage, const SampleRange& upstream_window);

    // Plans against whatever the upstream connectors have produced.
    SampleRange estimate_auto(std::uint32_t stage);

    // Runs the stage's transform on a previously planned range (identified
    // by its output range) and commits cursors. Returns the produced range.
    SampleRange compute(std::uint32_t stage, const SampleRange& planned_out);

    // Drops a planned frame: cursors advance, nothing is computed, and the
    // skip is recorded as consumed for the no-recompute rule.
    void skip(std::uint32_t stage, const SampleRange& planned_out);

    bool has_pending(std::uint32_t stage) const { return !pending_.at(stage).empty(); }
    std::optional<PlannedFrame> front_pending(std::uint32_t stage) const;

    // Window of upstream data announced to (or produced for) this stage but
    // not yet planned.
    SampleRange unplanned_window(std::uint32_t stage) const;
    void announce(std::uint32_t edge, const SampleRange& range);  // mark delivery

    // Per-stage history of computed input ranges, for overlap scans.
    const std::vector<SampleRange>& computed_log(std::uint32_t stage) const {
        return computed_log_.at(stage);
    }
    std::uint64_t frames_computed(std::uint32_t stage) const { return frames_computed_.at(stage); }
    std::uint64_t samples_in(std::uint32_t stage) const { return samples_in_.at(stage); }
    std::uint64_t samples_out(std::uint32_t stage) const { return samples_out_.at(stage); }

    bool cursors_sane() const;

    // Multiplex support: only the active input edge of a stage delivers.
    void set_edge_active(std::uint32_t edge, bool active) { edge_active_.at(edge) = active; }
    bool edge_active(std::uint32_t edge) const { return edge_active_.at(edge) != 0; }

    std::uint64_t next_out(std::uint32_t stage) const { return next_out_.at(stage); }
    // Path switching: restart an edge's stream / a stage's input cursor.
    void reset_edge(std::uint32_t edge, std::uint64_t position);
    void reset_stage_input(std::uint32_t stage, std::uint64_t position);

  private:
    std::uint32_t active_in_edge(std::uint32_t stage) const;

    const Topology topo_;
    std::vector<Connector> connectors_;
    std::vector<std::uint8_t> edge_active_;
    std::vector<std::uint64_t> announced_end_;  // per edge: marks heard
    std::vector<std::deque<PlannedFrame>> pending_;
    std::vector<std::uint64_t> next_in_;
    std::vector<std::uint64_t> next_out_;
    std::vector<std::deque<std::uint8_t>> feeds_;
    std::vector<std::uint64_t> feed_consumed_;
    std::vector<std::vector<std::uint8_t>> captures_;
    std::vector<std::vector<SampleRange>> computed_log_;
    std::vector<std::uint64_t> frames_computed_;
    std::vector<std::uint64_t> samples_in_;
    std::vector<std::uint64_t> samples_out_;
};

}  // namespace tickflow
