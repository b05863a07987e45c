#include "tickflow/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tickflow {

std::uint32_t Topology::add_stage(StageDescriptor stage) {
    for (const auto& s : stages_)
        if (s.name == stage.name)
            raise(ErrorCode::BadConfig, "stage '" + stage.name + "' declared twice");
    if (stage.kind == StageKind::Source) stage.in_ports = 0;
    if (stage.kind == StageKind::Sink) stage.out_ports = 0;
    stages_.push_back(std::move(stage));
    return static_cast<std::uint32_t>(stages_.size() - 1);
}

std::uint32_t Topology::stage_index(const std::string& name) const {
    for (std::uint32_t i = 0; i < stages_.size(); ++i)
        if (stages_[i].name == name) return i;
    raise(ErrorCode::BadConfig, "no stage named '" + name + "'");
}

std::uint32_t Topology::connect(const std::string& up, const std::string& down,
                                std::uint64_t rate, std::uint32_t width) {
    return connect(stage_index(up), stage_index(down), rate, width);
}

std::uint32_t Topology::connect(std::uint32_t up, std::uint32_t down, std::uint64_t rate,
                                std::uint32_t width) {
    if (up >= stages_.size() || down >= stages_.size())
        raise(ErrorCode::BadConfig, "connect references an unknown stage");
    const auto& u = stages_[up];
    const auto& d = stages_[down];
    if (out_edges(up).size() >= u.out_ports)
        raise(ErrorCode::PortAlreadyBound,
              "stage '" + u.name + "' has no free output port");
    if (in_edges(down).size() >= d.in_ports)
        raise(ErrorCode::PortAlreadyBound,
              "stage '" + d.name + "' has no free input port");
    if (u.out_rate != rate)
        raise(ErrorCode::RateMismatch, "stage '" + u.name + "' produces at " +
                                           std::to_string(u.out_rate) + ", connector rate " +
                                           std::to_string(rate));
    if (d.in_rate != rate)
        raise(ErrorCode::RateMismatch, "stage '" + d.name + "' consumes at " +
                                           std::to_string(d.in_rate) + ", connector rate " +
                                           std::to_string(rate));
    if (u.out_width != width || d.in_width != width)
        raise(ErrorCode::WrongSampleWidth,
              "sample width " + std::to_string(width) + " does not match stages '" + u.name +
                  "'/'" + d.name + "'");
    edges_.push_back(Edge{up, down, rate, width, 2});
    return static_cast<std::uint32_t>(edges_.size() - 1);
}

std::vector<std::uint32_t> Topology::in_edges(std::uint32_t stage) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].down == stage) out.push_back(i);
    return out;
}

std::vector<std::uint32_t> Topology::out_edges(std::uint32_t stage) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].up == stage) out.push_back(i);
    return out;
}

std::vector<std::uint32_t> Topology::sources() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < stages_.size(); ++i)
        if (stages_[i].kind == StageKind::Source) out.push_back(i);
    return out;
}

std::vector<std::uint32_t> Topology::sinks() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < stages_.size(); ++i)
        if (stages_[i].kind == StageKind::Sink) out.push_back(i);
    return out;
}

std::vector<std::uint32_t> Topology::validate() const {
    if (sources().empty() || sinks().empty())
        raise(ErrorCode::BadConfig, "topology needs at least one source and one sink");
    for (std::uint32_t i = 0; i < stages_.size(); ++i) {
        const auto& s = stages_[i];
        if (in_edges(i).size() != s.in_ports)
            raise(ErrorCode::DanglingPort, "stage '" + s.name + "' binds " +
                                               std::to_string(in_edges(i).size()) + " of " +
                                               std::to_string(s.in_ports) + " input ports");
        if (out_edges(i).size() != s.out_ports)
            raise(ErrorCode::DanglingPort, "stage '" + s.name + "' binds " +
                                               std::to_string(out_edges(i).size()) + " of " +
                                               std::to_string(s.out_ports) + " output ports");
    }
    // Kahn topological sort
    std::vector<std::uint32_t> indeg(stages_.size(), 0);
    for (const auto& e : edges_) ++indeg[e.down];
    std::deque<std::uint32_t> ready;
    for (std::uint32_t i = 0; i < stages_.size(); ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::vector<std::uint32_t> order;
    while (!ready.empty()) {
        auto s = ready.front();
        ready.pop_front();
        order.push_back(s);
        for (const auto& e : edges_)
            if (e.up == s && --indeg[e.down] == 0) ready.push_back(e.down);
    }
    if (order.size() != stages_.size())
        raise(ErrorCode::CyclicTopology, "stage graph contains a cycle");
    return order;
}

ComputeRegistry& ComputeRegistry::instance() {
    static ComputeRegistry reg;
    return reg;
}

void ComputeRegistry::add(const std::string& name, ComputeFn fn) {
    for (auto& e : entries_)
        if (e.first == name) {
            e.second = std::move(fn);
            return;
        }
    entries_.emplace_back(name, std::move(fn));
}

bool ComputeRegistry::has(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.first == name) return true;
    return false;
}

ComputeFn ComputeRegistry::get(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.first == name) return e.second;
    raise(ErrorCode::BadConfig, "no compute function registered as '" + name + "'");
}

ComputeFn make_builtin_compute(const std::string& name, std::uint64_t in_rate,
                               std::uint64_t out_rate, std::uint32_t in_width,
                               std::uint32_t out_width) {
    if (name.empty() || name == "passthrough") {
        return [](const SampleRange&, const std::vector<std::uint8_t>& in) { return in; };
    }
    if (name.rfind("xor:", 0) == 0 || name.rfind("add:", 0) == 0) {
        bool is_xor = name[0] == 'x';
        auto k = static_cast<std::uint8_t>(std::stoul(name.substr(4)));
        return [is_xor, k](const SampleRange&, const std::vector<std::uint8_t>& in) {
            auto out = in;
            for (auto& b : out) b = is_xor ? (b ^ k) : static_cast<std::uint8_t>(b + k);
            return out;
        };
    }
    if (name == "tile") {
        // rate adaptation placeholder: repeats or truncates the input frame
        std::uint64_t out_bytes = out_rate * out_width;
        return [out_bytes](const SampleRange&, const std::vector<std::uint8_t>& in) {
            std::vector<std::uint8_t> out(out_bytes);
            for (std::uint64_t i = 0; i < out_bytes; ++i) out[i] = in.empty() ? 0 : in[i % in.size()];
            return out;
        };
    }
    if (ComputeRegistry::instance().has(name)) return ComputeRegistry::instance().get(name);
    (void)in_rate;
    (void)out_rate;
    (void)in_width;
    (void)out_width;
    raise(ErrorCode::BadConfig, "unknown compute function '" + name + "'");
}

namespace {

StageKind kind_from_string(const std::string& s) {
    if (s == "source") return StageKind::Source;
    if (s == "sink") return StageKind::Sink;
    if (s == "intermediate") return StageKind::Intermediate;
    raise(ErrorCode::BadConfig, "unknown stage kind '" + s + "'");
}

std::string kind_to_string(StageKind k) {
    switch (k) {
        case StageKind::Source: return "source";
        case StageKind::Sink: return "sink";
        case StageKind::Intermediate: return "intermediate";
    }
    return "intermediate";
}

}  // namespace

Topology parse_topology_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        raise(ErrorCode::BadConfig, std::string("topology JSON malformed: ") + e.what());
    }
    Topology topo;
    for (const auto& js : j.at("stages")) {
        StageDescriptor s;
        s.name = js.at("name").get<std::string>();
        s.kind = kind_from_string(js.at("kind").get<std::string>());
        s.in_rate = js.value("in_rate", std::uint64_t{0});
        s.out_rate = js.value("out_rate", std::uint64_t{0});
        s.in_width = js.value("in_width", 1u);
        s.out_width = js.value("out_width", 1u);
        s.in_ports = js.value("in_ports", 1u);
        s.out_ports = js.value("out_ports", 1u);
        s.extra_compute_ticks = js.value("extra_compute_ticks", 0u);
        if (js.contains("init_range")) {
            auto arr = js.at("init_range");
            s.init_range = SampleRange{arr.at(0).get<std::uint64_t>(),
                                       arr.at(1).get<std::uint64_t>()};
        }
        s.compute_name = js.value("compute", std::string("passthrough"));
        s.compute = make_builtin_compute(s.compute_name, s.in_rate, s.out_rate, s.in_width,
                                         s.out_width);
        topo.add_stage(std::move(s));
    }
    for (const auto& je : j.at("edges")) {
        topo.connect(je.at("up").get<std::string>(), je.at("down").get<std::string>(),
                     je.at("rate").get<std::uint64_t>(), je.at("width").get<std::uint32_t>());
    }
    return topo;
}

Topology load_topology_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoFailure, "cannot open topology file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_topology_json(ss.str());
}

Topology make_chain_topology(std::uint32_t n_stages, std::uint64_t rate, std::uint32_t width) {
    if (n_stages < 2) raise(ErrorCode::BadConfig, "a chain needs at least source and sink");
    Topology topo;
    for (std::uint32_t i = 0; i < n_stages; ++i) {
        StageDescriptor s;
        s.name = i == 0 ? "src" : i + 1 == n_stages ? "snk" : "s" + std::to_string(i);
        s.kind = i == 0             ? StageKind::Source
                 : i + 1 == n_stages ? StageKind::Sink
                                     : StageKind::Intermediate;
        s.in_rate = s.out_rate = rate;
        s.in_width = s.out_width = width;
        s.compute_name = "passthrough";
        s.compute = make_builtin_compute("passthrough", rate, rate, width, width);
        topo.add_stage(std::move(s));
    }
    for (std::uint32_t i = 0; i + 1 < n_stages; ++i) topo.connect(i, i + 1, rate, width);
    return topo;
}

std::string topology_to_json(const Topology& topo) {
    nlohmann::json j;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : topo.stages()) {
        nlohmann::json js;
        js["name"] = s.name;
        js["kind"] = kind_to_string(s.kind);
        js["in_rate"] = s.in_rate;
        js["out_rate"] = s.out_rate;
        js["in_width"] = s.in_width;
        js["out_width"] = s.out_width;
        js["in_ports"] = s.in_ports;
        js["out_ports"] = s.out_ports;
        if (s.extra_compute_ticks) js["extra_compute_ticks"] = s.extra_compute_ticks;
        if (s.init_range) js["init_range"] = {s.init_range->index, s.init_range->size};
        js["compute"] = s.compute_name.empty() ? "passthrough" : s.compute_name;
        j["stages"].push_back(js);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : topo.edges()) {
        nlohmann::json je;
        je["up"] = topo.stage(e.up).name;
        je["down"] = topo.stage(e.down).name;
        je["rate"] = e.rate;
        je["width"] = e.width;
        j["edges"].push_back(je);
    }
    return j.dump(2);
}

}  // namespace tickflow
