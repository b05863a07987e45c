#include "tickflow/fsm.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace tickflow {

Letter make_letter(const SignalTable& table, const std::vector<SignalEvent>& events) {
    Letter l;
    l.events = events;
    std::vector<std::string> names;
    for (const auto& ev : events) names.push_back(table.name(ev.id));
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) l.text += (i ? "," : "") + names[i];
    return l;
}

std::vector<Letter> subsets_alphabet(const SignalTable& table,
                                     const std::vector<SignalId>& inputs) {
    std::vector<Letter> out;
    const std::uint64_t n = std::uint64_t{1} << inputs.size();
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        std::vector<SignalEvent> events;
        for (std::size_t i = 0; i < inputs.size(); ++i)
            if ((mask >> i) & 1) events.push_back(SignalEvent{inputs[i], {}, 0});
        out.push_back(make_letter(table, events));
    }
    std::sort(out.begin(), out.end(),
              [](const Letter& a, const Letter& b) { return a.text < b.text; });
    return out;
}

std::uint32_t Fsm::diameter() const {
    std::vector<std::uint32_t> depth(state_count, UINT32_MAX);
    std::deque<std::uint32_t> frontier{initial};
    depth[initial] = 0;
    std::uint32_t max_depth = 0;
    while (!frontier.empty()) {
        auto s = frontier.front();
        frontier.pop_front();
        for (std::uint32_t l = 0; l < alphabet.size(); ++l) {
            auto next = at(s, l).to;
            if (depth[next] == UINT32_MAX) {
                depth[next] = depth[s] + 1;
                max_depth = std::max(max_depth, depth[next]);
                frontier.push_back(next);
            }
        }
    }
    return max_depth;
}

Fsm extract_fsm(Program& program, const std::vector<Letter>& alphabet,
                const ExtractOptions& opts) {
    if (alphabet.empty()) raise(ErrorCode::BadConfig, "empty input alphabet");
    auto letters = alphabet;
    std::sort(letters.begin(), letters.end(),
              [](const Letter& a, const Letter& b) { return a.text < b.text; });

    Fsm fsm;
    fsm.alphabet = letters;
    for (std::size_t i = 0; i < program.signals().size(); ++i) {
        auto id = SignalId{static_cast<std::uint32_t>(i)};
        fsm.signal_names.push_back(program.signals().name(id));
        if (program.signals().is_input(id))
            fsm.inputs.push_back(id);
        else
            fsm.outputs.push_back(id);
    }

    auto origin = program.snapshot();
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<GlobalState> states{origin};
    ids.emplace(origin.key(), 0);
    std::deque<std::uint32_t> frontier{0};

    while (!frontier.empty()) {
        auto s = frontier.front();
        frontier.pop_front();
        for (std::uint32_t l = 0; l < letters.size(); ++l) {
            program.restore(states[s]);
            auto reaction = program.react(letters[l].events);
            auto next = program.snapshot();
            next.tick = 0;  // identity is the configuration, not the clock
            auto key = next.key();
            auto it = ids.find(key);
            std::uint32_t to;
            if (it == ids.end()) {
                to = static_cast<std::uint32_t>(states.size());
                if (to >= opts.max_states)
                    raise(ErrorCode::StateExplosion,
                          "reachable state count exceeded " + std::to_string(opts.max_states));
                ids.emplace(key, to);
                states.push_back(next);
                frontier.push_back(to);
            } else {
                to = it->second;
            }
            SignalSet outs(program.signals().size());
            for (const auto& ev : reaction.outputs) outs.insert(ev.id);
            fsm.transitions.push_back(FsmTransition{s, l, std::move(outs), to});
        }
    }
    fsm.state_count = static_cast<std::uint32_t>(states.size());
    fsm.initial = 0;
    program.restore(origin);
    return fsm;
}

EmissionVerdict check_emission(const Fsm& fsm, const std::string& signal) {
    EmissionVerdict v;
    v.signal = signal;
    SignalId id;
    for (std::uint32_t i = 0; i < fsm.signal_names.size(); ++i)
        if (fsm.signal_names[i] == signal) id = SignalId{i};
    if (!id.valid()) raise(ErrorCode::UnknownSignal, "no signal named '" + signal + "'");

    // BFS with letters in lexicographic order: first hit is the shortest
    // witness, ties broken lexicographically.
    std::vector<std::int64_t> parent(fsm.state_count, -1);
    std::vector<std::uint32_t> via_letter(fsm.state_count, 0);
    std::vector<std::uint8_t> seen(fsm.state_count, 0);
    std::deque<std::uint32_t> frontier{fsm.initial};
    seen[fsm.initial] = 1;

    auto path_to = [&](std::uint32_t state, std::uint32_t final_letter) {
        std::vector<std::uint32_t> letters{final_letter};
        for (std::uint32_t s = state; parent[s] >= 0; s = static_cast<std::uint32_t>(parent[s]))
            letters.push_back(via_letter[s]);
        std::reverse(letters.begin(), letters.end());
        std::vector<Letter> witness;
        for (auto l : letters) witness.push_back(fsm.alphabet[l]);
        return witness;
    };

    while (!frontier.empty()) {
        auto s = frontier.front();
        frontier.pop_front();
        for (std::uint32_t l = 0; l < fsm.alphabet.size(); ++l) {
            const auto& t = fsm.at(s, l);
            if (t.outputs.contains(id)) {
                v.possibly_emitted = true;
                v.witness = path_to(s, l);
                return v;
            }
            if (!seen[t.to]) {
                seen[t.to] = 1;
                parent[t.to] = s;
                via_letter[t.to] = l;
                frontier.push_back(t.to);
            }
        }
    }
    return v;
}

std::vector<Reaction> replay_witness(Program program, const std::vector<Letter>& witness) {
    std::vector<Reaction> out;
    out.reserve(witness.size());
    for (const auto& letter : witness) out.push_back(program.react(letter.events));
    return out;
}

Fsm minimize(const Fsm& fsm) {
    const auto n_letters = fsm.alphabet.size();
    std::vector<std::uint32_t> block(fsm.state_count, 0);

    // initial split: observable output signature per state
    {
        std::unordered_map<std::string, std::uint32_t> sig_ids;
        for (std::uint32_t s = 0; s < fsm.state_count; ++s) {
            std::string sig;
            for (std::uint32_t l = 0; l < n_letters; ++l) {
                for (auto w : fsm.at(s, l).outputs.words())
                    sig += std::to_string(w) + ",";
                sig += ";";
            }
            auto [it, fresh] = sig_ids.emplace(sig, static_cast<std::uint32_t>(sig_ids.size()));
            (void)fresh;
            block[s] = it->second;
        }
    }

    while (true) {
        std::unordered_map<std::string, std::uint32_t> sig_ids;
        std::vector<std::uint32_t> next_block(fsm.state_count, 0);
        for (std::uint32_t s = 0; s < fsm.state_count; ++s) {
            std::string sig = std::to_string(block[s]) + "|";
            for (std::uint32_t l = 0; l < n_letters; ++l)
                sig += std::to_string(block[fsm.at(s, l).to]) + ",";
            auto [it, fresh] = sig_ids.emplace(sig, static_cast<std::uint32_t>(sig_ids.size()));
            (void)fresh;
            next_block[s] = it->second;
        }
        bool stable = true;
        for (std::uint32_t s = 0; s < fsm.state_count; ++s)
            if (next_block[s] != block[s]) stable = false;
        std::uint32_t old_count = *std::max_element(block.begin(), block.end()) + 1;
        std::uint32_t new_count = *std::max_element(next_block.begin(), next_block.end()) + 1;
        block = std::move(next_block);
        if (stable || new_count == old_count) break;
    }

    // renumber blocks so the quotient's initial state is 0 and numbering
    // follows representative discovery order
    std::uint32_t n_blocks = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<std::uint32_t> remap(n_blocks, UINT32_MAX);
    std::uint32_t next_id = 0;
    remap[block[fsm.initial]] = next_id++;
    for (std::uint32_t s = 0; s < fsm.state_count; ++s)
        if (remap[block[s]] == UINT32_MAX) remap[block[s]] = next_id++;

    Fsm out;
    out.alphabet = fsm.alphabet;
    out.signal_names = fsm.signal_names;
    out.inputs = fsm.inputs;
    out.outputs = fsm.outputs;
    out.state_count = n_blocks;
    out.initial = 0;
    out.transitions.assign(static_cast<std::size_t>(n_blocks) * n_letters, {});
    std::vector<std::uint8_t> filled(n_blocks, 0);
    for (std::uint32_t s = 0; s < fsm.state_count; ++s) {
        auto b = remap[block[s]];
        if (filled[b]) continue;
        filled[b] = 1;
        for (std::uint32_t l = 0; l < n_letters; ++l) {
            const auto& t = fsm.at(s, l);
            out.transitions[static_cast<std::size_t>(b) * n_letters + l] =
                FsmTransition{b, l, t.outputs, remap[block[t.to]]};
        }
    }
    return out;
}

std::string fsm_to_text(const Fsm& fsm) {
    std::ostringstream os;
    os << ".inputs";
    for (auto id : fsm.inputs) os << ' ' << fsm.signal_names[id.value];
    os << "\n.outputs";
    for (auto id : fsm.outputs) os << ' ' << fsm.signal_names[id.value];
    os << "\n.states " << fsm.state_count << " initial " << fsm.initial << "\n";
    for (const auto& t : fsm.transitions) {
        os << t.from << ' ';
        const auto& letter = fsm.alphabet[t.letter];
        for (std::size_t i = 0; i < fsm.inputs.size(); ++i) {
            bool present = false;
            for (const auto& ev : letter.events)
                if (ev.id == fsm.inputs[i]) present = true;
            os << (present ? '1' : '0');
        }
        os << " / ";
        for (auto id : fsm.outputs) os << (t.outputs.contains(id) ? '1' : '0');
        os << ' ' << t.to << "\n";
    }
    return os.str();
}

std::string verdict_to_json(const EmissionVerdict& v) {
    nlohmann::json j;
    j["signal"] = v.signal;
    j["status"] = v.possibly_emitted ? "possibly-emitted" : "never-emitted";
    if (v.possibly_emitted) {
        j["witness"] = nlohmann::json::array();
        for (const auto& letter : v.witness) j["witness"].push_back(letter.text);
    }
    return j.dump();
}

std::vector<std::string> letter_to_strings(const SignalTable& table, const Letter& letter) {
    std::vector<std::string> out;
    for (const auto& ev : letter.events) {
        std::string item = table.name(ev.id);
        auto payload = payload_to_string(ev.value);
        if (!payload.empty()) item += "=" + payload;
        out.push_back(item);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Letter letter_from_strings(const SignalTable& table, const std::vector<std::string>& items) {
    std::vector<SignalEvent> events;
    for (const auto& item : items) {
        auto eq = item.find('=');
        std::string name = item.substr(0, eq == std::string::npos ? item.size() : eq);
        auto id = table.require(name);
        Payload payload;
        if (eq != std::string::npos) {
            std::string text = item.substr(eq + 1);
            auto colon = text.find(':');
            if (colon != std::string::npos)
                payload = SampleRange{std::stoull(text.substr(0, colon)),
                                      std::stoull(text.substr(colon + 1))};
            else
                payload = static_cast<std::int64_t>(std::stoll(text));
        }
        events.push_back(SignalEvent{id, payload, 0});
    }
    return make_letter(table, events);
}

}  // namespace tickflow
