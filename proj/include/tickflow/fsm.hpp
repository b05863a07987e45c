#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tickflow/program.hpp"

namespace tickflow {

// One alphabet letter: a set of input events fed in one tick. Valued inputs
// carry a fixed payload (payloads never steer control, so one
// representative per letter is exact).
struct Letter {
    std::vector<SignalEvent> events;
    std::string text;  // canonical sorted name list, "" for the empty letter
};

Letter make_letter(const SignalTable& table, const std::vector<SignalEvent>& events);

// All 2^n combinations of the given pure input signals, in lexicographic
// text order (the empty letter first).
std::vector<Letter> subsets_alphabet(const SignalTable& table,
                                     const std::vector<SignalId>& inputs);

struct FsmTransition {
    std::uint32_t from = 0;
    std::uint32_t letter = 0;  // index into Fsm::alphabet
    SignalSet outputs;
    std::uint32_t to = 0;
};

// Flat product machine (I, O, S, s0, T) extracted from a program.
// States are numbered in BFS discovery order with letters visited in
// lexicographic order, so the numbering is reproducible.
struct Fsm {
    std::vector<Letter> alphabet;            // I-valuations
    std::vector<std::string> signal_names;   // by SignalId, from the program
    std::vector<SignalId> inputs;            // I
    std::vector<SignalId> outputs;           // O (emittable signals)
    std::uint32_t state_count = 0;
    std::uint32_t initial = 0;
    std::vector<FsmTransition> transitions;  // grouped by from, letter order

    const FsmTransition& at(std::uint32_t state, std::uint32_t letter) const {
        return transitions.at(static_cast<std::size_t>(state) * alphabet.size() + letter);
    }
    std::uint32_t diameter() const;  // max BFS depth from initial
};

struct ExtractOptions {
    std::size_t max_states = 5'000'000;
};

Fsm extract_fsm(Program& program, const std::vector<Letter>& alphabet,
                const ExtractOptions& opts = {});

struct EmissionVerdict {
    std::string signal;
    bool possibly_emitted = false;
    // shortest input sequence whose final tick emits the signal
    std::vector<Letter> witness;
};

EmissionVerdict check_emission(const Fsm& fsm, const std::string& signal);

// Replays a witness on a fresh copy of the program; returns the reactions.
std::vector<Reaction> replay_witness(Program program, const std::vector<Letter>& witness);

// Coarsest bisimulation quotient via partition refinement.
Fsm minimize(const Fsm& fsm);

// Transition table, one line per (state, letter):
//   <state> <in-bits> / <out-bits> <next-state>
// preceded by '.inputs', '.outputs', '.states' header lines.
std::string fsm_to_text(const Fsm& fsm);

std::string verdict_to_json(const EmissionVerdict& v);

// Letters serialized with payloads ("name" / "name=index:size" / "name=n"),
// so witnesses survive a round trip through files.
std::vector<std::string> letter_to_strings(const SignalTable& table, const Letter& letter);
Letter letter_from_strings(const SignalTable& table, const std::vector<std::string>& items);

}  // namespace tickflow
