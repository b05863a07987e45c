#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tickflow/dataplane.hpp"
#include "tickflow/program.hpp"
#include "tickflow/topology.hpp"
#include "tickflow/trace.hpp"

namespace tickflow {

// Ticks a stage spends per item. TwoTick separates the estimating tick from
// the computing tick; Unit runs both in one tick (the software-pipelining
// throughput setting).
enum class StageCost : std::uint8_t { TwoTick, Unit };

// Rendez-vous usage. StartupHold: a stage asserts take on its first
// estimate and cancel once its first compute commits, explicitly holding
// its upstream until it can receive.
enum class RdvPolicy : std::uint8_t { Off, StartupHold };

// How the program begins. Immediate: the bootstrap ack is emitted at tick
// 0. AwaitIpAddr: a boot automaton first waits for IP_Addr (announcing the
// module instantiation signals), then for InitRange, whose payload becomes
// the bootstrap ack.
enum class BootMode : std::uint8_t { Immediate, AwaitIpAddr };

// Whether source data availability is an environment input (run mode) or
// assumed always present (closed verification models).
enum class SourceData : std::uint8_t { EnvDriven, AlwaysOn };

// Deliberate protocol defects for verification demos.
struct BugInjection {
    // Stage acks on receipt of data instead of on consumption.
    std::optional<std::uint32_t> ack_on_receipt;
    // Stage takes on its first estimate but never cancels.
    std::optional<std::uint32_t> drop_cancel;
    // Stage never acks upstream at all.
    std::optional<std::uint32_t> mute_ack;

    bool any() const { return ack_on_receipt || drop_cancel || mute_ack; }
};

struct DrmOptions {
    StageCost cost = StageCost::TwoTick;
    RdvPolicy rdv = RdvPolicy::StartupHold;
    BootMode boot = BootMode::Immediate;
    SourceData source_data = SourceData::EnvDriven;
    std::optional<SampleRange> init_range;      // bootstrap ack payload
    std::set<std::uint32_t> fold_out_stages;    // multiplex fan points (OR-credit)
    std::set<std::uint32_t> inactive_edges;     // initially inactive paths
    std::vector<std::string> module_names;      // boot announcement names per stage
    BugInjection bugs;
};

struct EdgeSignals {
    SignalId mark;    // E_Mark_to_Down / S_Mark_from_Up (valued: announced range)
    SignalId compute; // E_Compute_to_Down / S_Compute_from_Up
    SignalId ack;     // Ack_to_Up / Ack_From_Down (valued: consumed range)
    SignalId take;    // Rendez-Vous
    SignalId cancel;
};

struct StageSignals {
    SignalId ready;  // receive-capacity indicator, observed by S1
    SignalId err;    // protocol overflow
    SignalId data;   // source availability (sources only)
};

// Layout of one generated stage automaton, for state surgery (retopology).
struct StageDims {
    bool has_m = false;    // marks heard, unplanned        {0..2}
    bool has_p = false;    // deliveries heard, uncomputed  {0..2}
    std::uint32_t credits = 0;  // number of credit counters {0..2} each
    std::uint32_t phases = 1;   // 1 + compute latency in ticks (TwoTick)
    bool has_h = false;    // startup-hold progress          {0..2}
    std::vector<std::uint32_t> initial_credits;
    // generated automata keep only reachable tuples; these map between the
    // full tuple index space and the dense state numbering
    std::vector<std::uint32_t> tuple_to_state;
    std::vector<std::uint32_t> state_to_tuple;

    std::uint32_t tuple_count() const;
    std::uint32_t encode_tuple(std::uint32_t m, std::uint32_t p,
                               const std::vector<std::uint32_t>& c, std::uint32_t phase,
                               std::uint32_t h) const;
    void decode_tuple(std::uint32_t tuple, std::uint32_t& m, std::uint32_t& p,
                      std::vector<std::uint32_t>& c, std::uint32_t& phase,
                      std::uint32_t& h) const;
    // dense state for a tuple; throws if the tuple was pruned
    std::uint32_t state_of(std::uint32_t m, std::uint32_t p,
                           const std::vector<std::uint32_t>& c, std::uint32_t phase,
                           std::uint32_t h) const;
};

// A control program generated from a topology: one protocol automaton per
// stage plus the boot automaton, with all signal bookkeeping exposed.
struct DrmProgram {
    Program program;
    Topology topology;
    DrmOptions options;
    std::vector<EdgeSignals> edge_signals;
    std::vector<StageSignals> stage_signals;
    std::vector<std::uint32_t> stage_automaton;  // stage index -> automaton index
    std::vector<StageDims> stage_dims;
    SignalId ip_addr, init_range_sig, user_quit;
    std::vector<SignalId> module_signals;
    SampleRange bootstrap_range{0, 0};
};

DrmProgram build_drm(const Topology& topo, const DrmOptions& opts = {});

// Installs the suspension handshake for one edge (idempotent; build_drm
// already installs every edge when the policy asks for it).
void rendezvous_guard(DrmProgram& drm, std::uint32_t edge);

struct StageCounters {
    std::uint64_t estimates = 0;
    std::uint64_t computes = 0;
    std::uint64_t acks = 0;
};

struct PipelineRun {
    std::uint64_t ticks = 0;           // tick ordinal of the last sink consumption
    std::uint64_t produced = 0;        // frames computed at sources
    std::uint64_t consumed = 0;        // frames consumed at sinks
    std::vector<StageCounters> stages;
    std::vector<Reaction> reactions;
    RunSummary summary(std::size_t n_stages) const {
        return RunSummary{n_stages, ticks, produced, consumed};
    }
};

// Hosts a DrmProgram over a Dataplane: injects availability inputs, runs
// reactions, routes fired actions into estimate/compute calls, and applies
// mark announcements.
class PipelineRunner : public DataplaneBinding {
  public:
    PipelineRunner(DrmProgram drm, Dataplane dataplane);

    Dataplane& dataplane() { return dataplane_; }
    const Dataplane& dataplane() const { return dataplane_; }
    DrmProgram& drm() { return drm_; }
    const PipelineRun& run_stats() const { return run_; }
    void set_trace(std::ostream* out) { trace_ = TraceWriter(out); }
    void keep_reactions(bool v) { keep_reactions_ = v; }

    // With more than one worker, the tick's fired computes run on a small
    // pool after the reaction settles. Each stage still computes its ranges
    // in order; outputs are byte-identical to the single-threaded run.
    void set_workers(std::uint32_t n) { workers_ = n == 0 ? 1 : n; }

    // AwaitIpAddr boot sequence: one empty tick, IP_Addr, InitRange.
    void boot();

    // One tick. `available` overrides per-source availability; by default a
    // source is available while its feed holds a frame and the item budget
    // is not exhausted.
    Reaction step(const std::vector<std::pair<std::uint32_t, bool>>& available = {});

    // Caps how many frames each source plans (no cap when unset).
    void set_item_budget(std::optional<std::uint64_t> items) { item_budget_ = items; }

    // Runs until every sink consumed `items` frames (or max_ticks passes).
    const PipelineRun& run_items(std::uint64_t items, std::uint64_t max_ticks);
    const PipelineRun& run_ticks(std::uint64_t ticks);

    // Switches the active path at a fan point: edges_out deactivate (their
    // in-flight ranges are skipped), edges_in activate from the next tick.
    void retopologize(const std::vector<std::uint32_t>& edges_out,
                      const std::vector<std::uint32_t>& edges_in);

    // DataplaneBinding
    void run_action(const Action& action, std::uint64_t tick) override;
    Payload hook_payload(std::uint32_t hook_id) override;

  private:
    void apply_reaction(const Reaction& r);
    void flush_deferred();
    void deactivate_path(std::uint32_t edge);
    void activate_path(std::uint32_t edge);

    DrmProgram drm_;
    Dataplane dataplane_;
    PipelineRun run_;
    TraceWriter trace_;
    std::vector<SampleRange> last_planned_;
    std::vector<SampleRange> last_consumed_;
    std::optional<std::uint64_t> item_budget_;
    std::vector<std::pair<std::uint32_t, SampleRange>> deferred_;  // stage, planned out
    std::vector<std::uint8_t> injected_;  // availability input fed last tick
    std::uint32_t workers_ = 1;
    bool keep_reactions_ = false;
    bool booted_ = false;
};

// Hook id layout shared by the generator and the runner.
constexpr std::uint32_t hook_planned(std::uint32_t stage) { return stage << 1; }
constexpr std::uint32_t hook_consumed(std::uint32_t stage) { return (stage << 1) | 1; }

}  // namespace tickflow
