#include "tickflow/trace.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace tickflow {

std::string format_reaction(const Reaction& reaction, const SignalTable& table) {
    std::vector<std::string> ins;
    ins.reserve(reaction.inputs.size());
    for (const auto& ev : reaction.inputs) ins.push_back(table.name(ev.id));
    std::sort(ins.begin(), ins.end());

    std::vector<std::string> outs;
    outs.reserve(reaction.outputs.size());
    for (const auto& ev : reaction.outputs) {
        std::string entry = table.name(ev.id);
        std::string payload = payload_to_string(ev.value);
        if (!payload.empty()) entry += "=" + payload;
        outs.push_back(entry);
    }
    std::sort(outs.begin(), outs.end());

    std::ostringstream os;
    os << "tick=" << reaction.tick << " in=";
    for (std::size_t i = 0; i < ins.size(); ++i) os << (i ? "," : "") << ins[i];
    os << " out=";
    for (std::size_t i = 0; i < outs.size(); ++i) os << (i ? "," : "") << outs[i];
    os << " steps=" << reaction.micro_steps;
    return os.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string field(const std::string& line, const std::string& name) {
    auto pos = line.find(name + "=");
    if (pos == std::string::npos)
        raise(ErrorCode::BadConfig, "trace line missing '" + name + "=': " + line);
    pos += name.size() + 1;
    auto end = line.find(' ', pos);
    return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

}  // namespace

TraceLine parse_trace_line(const std::string& line) {
    TraceLine t;
    t.tick = std::stoull(field(line, "tick"));
    t.steps = static_cast<std::uint32_t>(std::stoul(field(line, "steps")));
    t.inputs = split_csv(field(line, "in"));
    for (const auto& entry : split_csv(field(line, "out"))) {
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            t.outputs.emplace_back(entry, "");
        else
            t.outputs.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
    }
    return t;
}

std::string format_summary(const RunSummary& s) {
    std::ostringstream os;
    os << "stages=" << s.stages << " ticks=" << s.ticks << " produced=" << s.produced
       << " consumed=" << s.consumed;
    return os.str();
}

void TraceWriter::write(const Reaction& reaction, const SignalTable& table) {
    if (out_) *out_ << format_reaction(reaction, table) << '\n';
    ++lines_;
}

}  // namespace tickflow
