#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tickflow/errors.hpp"
#include "tickflow/range.hpp"

namespace tickflow {

enum class StageKind : std::uint8_t { Source, Intermediate, Sink };

// Pure per-frame transform: consumes one input frame's bytes, returns one
// output frame's bytes. Input/output sizes are fixed by the stage's rates.
using ComputeFn = std::function<std::vector<std::uint8_t>(
    const SampleRange& in_range, const std::vector<std::uint8_t>& in_bytes)>;

// A DSP stage: what it consumes and produces per frame, and the transform.
// Frames map one-to-one through a stage: in_rate samples in, out_rate
// samples out.
struct StageDescriptor {
    std::string name;
    StageKind kind = StageKind::Intermediate;
    std::uint64_t in_rate = 0;    // samples per frame on the input side
    std::uint64_t out_rate = 0;   // samples per frame on the output side
    std::uint32_t in_width = 1;   // bytes per sample
    std::uint32_t out_width = 1;
    std::uint32_t in_ports = 1;
    std::uint32_t out_ports = 1;
    std::optional<SampleRange> init_range;  // source bootstrap: start index + frame size
    std::string compute_name;               // registry key, for config round trips
    ComputeFn compute;
    // Extra reaction ticks a stage's computing phase consumes beyond the
    // default; models slow computing functions.
    std::uint32_t extra_compute_ticks = 0;

    std::uint64_t source_frame() const {
        return init_range && init_range->size > 0 ? init_range->size : out_rate;
    }
};

struct Edge {
    std::uint32_t up = 0;
    std::uint32_t down = 0;
    std::uint64_t rate = 0;       // samples per logical frame
    std::uint32_t width = 1;      // bytes per sample
    std::uint64_t capacity_frames = 2;  // double buffering by default
};

// Stage graph. Edges are added through connect(), which enforces the
// one-connector-per-port rule and rate agreement with the stage
// declarations.
class Topology {
  public:
    std::uint32_t add_stage(StageDescriptor stage);

    std::uint32_t connect(std::uint32_t up, std::uint32_t down, std::uint64_t rate,
                          std::uint32_t width);
    std::uint32_t connect(const std::string& up, const std::string& down, std::uint64_t rate,
                          std::uint32_t width);

    const std::vector<StageDescriptor>& stages() const { return stages_; }
    const std::vector<Edge>& edges() const { return edges_; }
    StageDescriptor& stage(std::uint32_t idx) { return stages_.at(idx); }
    const StageDescriptor& stage(std::uint32_t idx) const { return stages_.at(idx); }
    std::uint32_t stage_index(const std::string& name) const;

    std::vector<std::uint32_t> in_edges(std::uint32_t stage) const;
    std::vector<std::uint32_t> out_edges(std::uint32_t stage) const;
    std::vector<std::uint32_t> sources() const;
    std::vector<std::uint32_t> sinks() const;

    // Topological order; throws CyclicTopology on a cycle. Also checks that
    // every declared port is bound (DanglingPort) and that there is at
    // least one source and one sink.
    std::vector<std::uint32_t> validate() const;

  private:
    std::vector<StageDescriptor> stages_;
    std::vector<Edge> edges_;
};

// Named compute functions, so topologies can be loaded from config files.
class ComputeRegistry {
  public:
    static ComputeRegistry& instance();
    void add(const std::string& name, ComputeFn fn);
    ComputeFn get(const std::string& name) const;
    bool has(const std::string& name) const;

  private:
    std::vector<std::pair<std::string, ComputeFn>> entries_;
};

// Built-in transforms: "passthrough", "xor:<byte>", "add:<byte>".
ComputeFn make_builtin_compute(const std::string& name, std::uint64_t in_rate,
                               std::uint64_t out_rate, std::uint32_t in_width,
                               std::uint32_t out_width);

Topology load_topology_json(const std::string& path);
Topology parse_topology_json(const std::string& text);
std::string topology_to_json(const Topology& topo);

// Straight chain of pass-through stages (source, n-2 intermediates, sink),
// every edge at the same rate and width.
Topology make_chain_topology(std::uint32_t n_stages, std::uint64_t rate = 4,
                             std::uint32_t width = 1);

}  // namespace tickflow
