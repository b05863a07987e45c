#include "tickflow/dataplane.hpp"

#include <algorithm>

namespace tickflow {

Dataplane::Dataplane(const Topology& topo) : topo_(topo) {
    const auto n = topo_.stages().size();
    connectors_.reserve(topo_.edges().size());
    for (const auto& e : topo_.edges())
        connectors_.emplace_back(e.capacity_frames * e.rate, e.rate, e.width);
    edge_active_.assign(topo_.edges().size(), 1);
    announced_end_.assign(topo_.edges().size(), 0);
    pending_.resize(n);
    next_in_.assign(n, 0);
    next_out_.assign(n, 0);
    feeds_.resize(n);
    feed_consumed_.assign(n, 0);
    captures_.resize(n);
    computed_log_.resize(n);
    frames_computed_.assign(n, 0);
    samples_in_.assign(n, 0);
    samples_out_.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto& s = topo_.stage(i);
        if (s.kind == StageKind::Source && s.init_range) {
            next_in_[i] = s.init_range->index;
            next_out_[i] = s.init_range->index;
        }
    }
}

void Dataplane::feed_source(std::uint32_t stage, const std::vector<std::uint8_t>& bytes) {
    const auto& s = topo_.stage(stage);
    if (s.kind != StageKind::Source)
        raise(ErrorCode::BadConfig, "stage '" + s.name + "' is not a source");
    if (bytes.size() % s.in_width != 0)
        raise(ErrorCode::WrongSampleWidth, "feed not a whole number of samples");
    feeds_[stage].insert(feeds_[stage].end(), bytes.begin(), bytes.end());
}

std::uint64_t Dataplane::source_samples_available(std::uint32_t stage) const {
    return feeds_.at(stage).size() / topo_.stage(stage).in_width;
}

const std::vector<std::uint8_t>& Dataplane::sink_capture(std::uint32_t stage) const {
    return captures_.at(stage);
}

std::uint32_t Dataplane::active_in_edge(std::uint32_t stage) const {
    std::uint32_t found = UINT32_MAX;
    for (auto e : topo_.in_edges(stage)) {
        if (!edge_active_[e]) continue;
        if (found != UINT32_MAX)
            raise(ErrorCode::BadConfig,
                  "stage '" + topo_.stage(stage).name + "' has two active input edges");
        found = e;
    }
    if (found == UINT32_MAX)
        raise(ErrorCode::InsufficientData,
              "stage '" + topo_.stage(stage).name + "' has no active input edge");
    return found;
}

SampleRange Dataplane::unplanned_window(std::uint32_t stage) const {
    const auto& s = topo_.stage(stage);
    if (s.kind == StageKind::Source) {
        std::uint64_t base = feed_consumed_[stage];
        std::uint64_t end = base + source_samples_available(stage);
        std::uint64_t from = std::max(next_in_[stage], base);
        return SampleRange{from, end > from ? end - from : 0};
    }
    auto e = active_in_edge(stage);
    std::uint64_t end = std::max(announced_end_[e], connectors_[e].write_cursor());
    std::uint64_t from = next_in_[stage];
    return SampleRange{from, end > from ? end - from : 0};
}

bool Dataplane::frame_ready(std::uint32_t stage) const {
    const auto& s = topo_.stage(stage);
    std::uint64_t frame = s.kind == StageKind::Source ? s.source_frame() : s.in_rate;
    return unplanned_window(stage).size >= frame;
}

SampleRange Dataplane::estimate(std::uint32_t stage, const SampleRange& upstream_window) {
    const auto& s = topo_.stage(stage);
    if (upstream_window.size == 0)
        raise(ErrorCode::InsufficientData, "stage '" + s.name + "': empty upstream window");
    std::uint64_t frame = s.kind == StageKind::Source ? s.source_frame() : s.in_rate;
    std::uint64_t from = next_in_[stage];
    if (upstream_window.index > from || upstream_window.end() < from + frame)
        raise(ErrorCode::InsufficientData,
              "stage '" + s.name + "': window " + to_string(upstream_window) +
                  " does not cover frame at " + std::to_string(from) + "+" +
                  std::to_string(frame));
    PlannedFrame plan;
    plan.in = SampleRange{from, frame};
    switch (s.kind) {
        case StageKind::Source:
            plan.out = SampleRange{next_out_[stage], frame};
            next_out_[stage] += frame;
            break;
        case StageKind::Intermediate:
            plan.out = SampleRange{next_out_[stage], s.out_rate};
            next_out_[stage] += s.out_rate;
            break;
        case StageKind::Sink:
            plan.out = plan.in;
            break;
    }
    next_in_[stage] += frame;
    pending_[stage].push_back(plan);
    return plan.out;
}

SampleRange Dataplane::estimate_auto(std::uint32_t stage) {
    return estimate(stage, unplanned_window(stage));
}

std::optional<PlannedFrame> Dataplane::front_pending(std::uint32_t stage) const {
    if (pending_.at(stage).empty()) return std::nullopt;
    return pending_.at(stage).front();
}

SampleRange Dataplane::compute(std::uint32_t stage, const SampleRange& planned_out) {
    const auto& s = topo_.stage(stage);
    if (pending_[stage].empty() || !(pending_[stage].front().out == planned_out))
        raise(ErrorCode::StaleRange, "stage '" + s.name + "': range " + to_string(planned_out) +
                                         " was not planned or was already computed");
    PlannedFrame plan = pending_[stage].front();

    std::vector<std::uint8_t> in_bytes;
    if (s.kind == StageKind::Source) {
        auto& feed = feeds_[stage];
        std::uint64_t base = feed_consumed_[stage];
        if (plan.in.index < base)
            raise(ErrorCode::StaleRange, "source window receded");
        std::uint64_t skip_samples = plan.in.index - base;
        std::uint64_t need = (skip_samples + plan.in.size) * s.in_width;
        if (feed.size() < need)
            raise(ErrorCode::InsufficientData, "source '" + s.name + "' feed exhausted");
        feed.erase(feed.begin(), feed.begin() + static_cast<std::ptrdiff_t>(skip_samples * s.in_width));
        in_bytes.assign(feed.begin(), feed.begin() + static_cast<std::ptrdiff_t>(plan.in.size * s.in_width));
        feed.erase(feed.begin(), feed.begin() + static_cast<std::ptrdiff_t>(plan.in.size * s.in_width));
        feed_consumed_[stage] = plan.in.end();
    } else {
        auto e = active_in_edge(stage);
        in_bytes = connectors_[e].peek(plan.in);
        connectors_[e].consume_to(plan.in.end());
    }

    std::vector<std::uint8_t> out_bytes =
        s.compute ? s.compute(plan.in, in_bytes) : in_bytes;

    if (s.kind == StageKind::Sink) {
        captures_[stage].insert(captures_[stage].end(), out_bytes.begin(), out_bytes.end());
    } else {
        if (out_bytes.size() != plan.out.size * s.out_width)
            raise(ErrorCode::WrongSampleWidth,
                  "stage '" + s.name + "' produced " + std::to_string(out_bytes.size()) +
                      " bytes for range " + to_string(plan.out));
        for (auto e : topo_.out_edges(stage)) connectors_[e].push(plan.out, out_bytes);
    }

    pending_[stage].pop_front();
    computed_log_[stage].push_back(plan.in);
    ++frames_computed_[stage];
    samples_in_[stage] += plan.in.size;
    samples_out_[stage] += s.kind == StageKind::Sink ? 0 : plan.out.size;
    return plan.out;
}

void Dataplane::skip(std::uint32_t stage, const SampleRange& planned_out) {
    const auto& s = topo_.stage(stage);
    if (pending_[stage].empty() || !(pending_[stage].front().out == planned_out))
        raise(ErrorCode::StaleRange,
              "stage '" + s.name + "': skip of an unplanned range " + to_string(planned_out));
    PlannedFrame plan = pending_[stage].front();
    pending_[stage].pop_front();
    if (s.kind == StageKind::Source) {
        auto& feed = feeds_[stage];
        std::uint64_t base = feed_consumed_[stage];
        std::uint64_t have = source_samples_available(stage);
        std::uint64_t drop = std::min(plan.in.end() > base ? plan.in.end() - base : 0, have);
        feed.erase(feed.begin(), feed.begin() + static_cast<std::ptrdiff_t>(drop * s.in_width));
        feed_consumed_[stage] = base + drop;
    } else {
        auto e = active_in_edge(stage);
        auto upto = std::min(plan.in.end(), connectors_[e].write_cursor());
        if (upto > connectors_[e].read_cursor()) connectors_[e].consume_to(upto);
    }
    // Skipped ranges count as consumed for the no-recompute rule.
    computed_log_[stage].push_back(plan.in);
}

void Dataplane::announce(std::uint32_t edge, const SampleRange& range) {
    announced_end_[edge] = std::max(announced_end_[edge], range.end());
}

void Dataplane::reset_edge(std::uint32_t edge, std::uint64_t position) {
    connectors_.at(edge).reset_to(position);
    announced_end_.at(edge) = position;
}

void Dataplane::reset_stage_input(std::uint32_t stage, std::uint64_t position) {
    next_in_.at(stage) = position;
    pending_.at(stage).clear();
}

bool Dataplane::cursors_sane() const {
    for (const auto& c : connectors_)
        if (!c.cursors_sane()) return false;
    return true;
}

}  // namespace tickflow
