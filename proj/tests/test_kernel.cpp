#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "tickflow/program.hpp"
#include "tickflow/trace.hpp"

using namespace tickflow;

namespace {

// 2-state automaton that flips on every tick.
ControlAutomaton make_toggle() {
    ControlAutomaton a("toggle");
    auto s0 = a.add_state("s0");
    auto s1 = a.add_state("s1");
    a.set_initial(s0);
    a.add_transition({s0, Guard::always(), {}, s1, {}});
    a.add_transition({s1, Guard::always(), {}, s0, {}});
    return a;
}

SignalTable one_pure_input(const std::string& name) {
    SignalTable t;
    t.declare(name, SignalKind::Pure, true);
    return t;
}

}  // namespace

TEST_CASE("minimal program: toggle plus one pure signal") {
    auto p = declare_program({make_toggle()}, one_pure_input("t"));
    CHECK(p.automata().size() == 1);
    CHECK(p.automata()[0].state_count() == 2);
}

TEST_CASE("duplicate signal declaration is rejected") {
    SignalTable t;
    t.declare("A");
    CHECK_THROWS_WITH_AS(t.declare("A"), doctest::Contains("declared twice"), Error);
}

TEST_CASE("two transitions from one state guarded by the same signal are nondeterministic") {
    SignalTable t;
    auto a_sig = t.declare("A", SignalKind::Pure, true);
    ControlAutomaton a("bad");
    auto s0 = a.add_state("s0");
    auto s1 = a.add_state("s1");
    a.set_initial(s0);
    a.add_transition({s0, Guard::present(a_sig), {}, s1, {}});
    a.add_transition({s0, Guard::present(a_sig), {}, s0, {}});
    bool threw = false;
    try {
        declare_program({std::move(a)}, std::move(t));
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::NondeterministicAutomaton);
    }
    CHECK(threw);
}

TEST_CASE("guard over an undeclared signal is rejected") {
    SignalTable t;
    t.declare("A", SignalKind::Pure, true);
    ControlAutomaton a("bad");
    auto s0 = a.add_state("s0");
    a.set_initial(s0);
    a.add_transition({s0, Guard::present(SignalId{57}), {}, s0, {}});
    bool threw = false;
    try {
        declare_program({std::move(a)}, std::move(t));
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::UnknownSignalInGuard);
    }
    CHECK(threw);
}

TEST_CASE("negating current-tick presence is rejected, negating pre() is fine") {
    SignalTable t;
    auto a_sig = t.declare("A", SignalKind::Pure, true);
    CHECK_FALSE((!Guard::present(a_sig)).monotone());
    CHECK((!Guard::pre(a_sig)).monotone());

    ControlAutomaton a("bad");
    auto s0 = a.add_state("s0");
    a.set_initial(s0);
    a.add_transition({s0, !Guard::present(a_sig), {}, s0, {}});
    bool threw = false;
    try {
        declare_program({std::move(a)}, std::move(t));
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::NonMonotoneGuard);
    }
    CHECK(threw);
}

TEST_CASE("unreachable states are rejected at build") {
    SignalTable t;
    t.declare("A", SignalKind::Pure, true);
    ControlAutomaton a("island");
    auto s0 = a.add_state("s0");
    a.add_state("orphan");
    a.set_initial(s0);
    bool threw = false;
    try {
        declare_program({std::move(a)}, std::move(t));
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::UnreachableState);
    }
    CHECK(threw);
}

TEST_CASE("toggle reacts to an empty tick: state flips, no outputs") {
    auto p = declare_program({make_toggle()}, one_pure_input("t"));
    CHECK(p.current_state(0) == 0);
    auto r = p.react({});
    CHECK(r.outputs.empty());
    CHECK(r.micro_steps == 1);
    CHECK(p.current_state(0) == 1);
    p.react({});
    CHECK(p.current_state(0) == 0);
}

TEST_CASE("same-tick cascade: GO -> A -> B with two micro-steps") {
    SignalTable t;
    auto go = t.declare("GO", SignalKind::Pure, true);
    auto a_sig = t.declare("A");
    auto b_sig = t.declare("B");

    ControlAutomaton p("P");
    auto ps = p.add_state("w");
    p.set_initial(ps);
    p.add_transition({ps, Guard::present(go), {{a_sig, PayloadSource::none()}}, ps, {}});

    ControlAutomaton q("Q");
    auto qs = q.add_state("w");
    q.set_initial(qs);
    q.add_transition({qs, Guard::present(a_sig), {{b_sig, PayloadSource::none()}}, qs, {}});

    auto prog = declare_program({std::move(p), std::move(q)}, std::move(t));
    auto r = prog.react({SignalEvent{go, {}, 0}});
    CHECK(r.emitted(a_sig));
    CHECK(r.emitted(b_sig));
    CHECK(r.micro_steps == 2);
    CHECK(format_reaction(r, prog.signals()) == "tick=0 in=GO out=A,B steps=2");
}

TEST_CASE("micro-step count stays within signals + 1 on a full emission chain") {
    const std::uint32_t n = 12;
    SignalTable t;
    std::vector<SignalId> sigs;
    sigs.push_back(t.declare("S0", SignalKind::Pure, true));
    for (std::uint32_t i = 1; i <= n; ++i) sigs.push_back(t.declare("S" + std::to_string(i)));

    std::vector<ControlAutomaton> autos;
    for (std::uint32_t i = 0; i < n; ++i) {
        ControlAutomaton a("link" + std::to_string(i));
        auto s = a.add_state("w");
        a.set_initial(s);
        a.add_transition(
            {s, Guard::present(sigs[i]), {{sigs[i + 1], PayloadSource::none()}}, s, {}});
        autos.push_back(std::move(a));
    }
    auto prog = declare_program(std::move(autos), std::move(t));
    auto r = prog.react({SignalEvent{sigs[0], {}, 0}});
    CHECK(r.micro_steps == n);
    CHECK(r.micro_steps <= prog.signals().size() + 1);
    CHECK(r.emitted(sigs[n]));
}

TEST_CASE("conflicting valued emissions in one tick are an error") {
    SignalTable t;
    auto go = t.declare("GO", SignalKind::Pure, true);
    auto v = t.declare("V", SignalKind::ValuedRange);

    auto writer = [&](const std::string& name, SampleRange r) {
        ControlAutomaton a(name);
        auto s = a.add_state("w");
        a.set_initial(s);
        a.add_transition({s, Guard::present(go), {{v, PayloadSource::constant(r)}}, s, {}});
        return a;
    };

    SUBCASE("unequal payloads collide") {
        auto prog = declare_program({writer("w1", {0, 10}), writer("w2", {5, 10})}, std::move(t));
        bool threw = false;
        try {
            prog.react({SignalEvent{go, {}, 0}});
        } catch (const Error& e) {
            threw = true;
            CHECK(e.code() == ErrorCode::ConflictingValuedEmission);
        }
        CHECK(threw);
    }
    SUBCASE("equal payloads are idempotent") {
        auto prog = declare_program({writer("w1", {0, 10}), writer("w2", {0, 10})}, std::move(t));
        auto r = prog.react({SignalEvent{go, {}, 0}});
        CHECK(r.emitted(v));
        CHECK(r.output_value(v) == Payload{SampleRange{0, 10}});
    }
}

TEST_CASE("pre() observes the previous tick's valuation") {
    SignalTable t;
    auto y = t.declare("Y", SignalKind::Pure, true);
    auto x = t.declare("X");
    ControlAutomaton a("delayed");
    auto s = a.add_state("w");
    a.set_initial(s);
    a.add_transition({s, Guard::pre(y), {{x, PayloadSource::none()}}, s, {}});
    auto prog = declare_program({std::move(a)}, std::move(t));

    auto r0 = prog.react({SignalEvent{y, {}, 0}});
    CHECK_FALSE(r0.emitted(x));
    auto r1 = prog.react({});
    CHECK(r1.emitted(x));
    auto r2 = prog.react({});
    CHECK_FALSE(r2.emitted(x));
}

TEST_CASE("suspension holds state and silences emissions") {
    SignalTable t;
    auto e = t.declare("E");
    ControlAutomaton a("worker");
    a.set_suspendable(true);
    auto s0 = a.add_state("s0");
    auto s1 = a.add_state("s1");
    a.set_initial(s0);
    a.add_transition({s0, Guard::always(), {{e, PayloadSource::none()}}, s1, {}});
    a.add_transition({s1, Guard::always(), {{e, PayloadSource::none()}}, s0, {}});
    auto prog = declare_program({std::move(a)}, std::move(t));

    SUBCASE("three suspended ticks leave the automaton untouched") {
        prog.suspend(0);
        for (int i = 0; i < 3; ++i) {
            auto r = prog.react({});
            CHECK(r.outputs.empty());
            CHECK(prog.current_state(0) == 0);
        }
        prog.resume(0);
        auto r = prog.react({});
        CHECK(r.emitted(e));
        CHECK(prog.current_state(0) == 1);
    }
    SUBCASE("suspend then resume within the same tick is a no-op") {
        prog.suspend(0);
        prog.resume(0);
        auto r = prog.react({});
        CHECK(r.emitted(e));
    }
    SUBCASE("resume without suspension is an error") {
        bool threw = false;
        try {
            prog.resume(0);
        } catch (const Error& err) {
            threw = true;
            CHECK(err.code() == ErrorCode::NotSuspended);
        }
        CHECK(threw);
    }
}

TEST_CASE("suspend on a non-suspendable automaton is an error") {
    auto prog = declare_program({make_toggle()}, one_pure_input("t"));
    bool threw = false;
    try {
        prog.suspend(0);
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::NotSuspendable);
    }
    CHECK(threw);
}

TEST_CASE("rendezvous binding: take suspends from the next tick, cancel re-enables") {
    SignalTable t;
    auto take = t.declare("take", SignalKind::Pure, true);
    auto cancel = t.declare("cancel", SignalKind::Pure, true);
    auto e = t.declare("E_Compute_to_Down");

    ControlAutomaton up("up");
    up.set_suspendable(true);
    auto s = up.add_state("run");
    up.set_initial(s);
    up.add_transition({s, Guard::always(), {{e, PayloadSource::none()}}, s, {}});

    auto prog = declare_program({std::move(up)}, std::move(t));
    prog.add_rendezvous({take, cancel, 0});

    // take at tick 0, cancel at tick 3: emissions resume at tick 4.
    CHECK(prog.react({SignalEvent{take, {}, 0}}).emitted(e));  // take latches after the tick
    CHECK_FALSE(prog.react({}).emitted(e));                    // tick 1
    CHECK_FALSE(prog.react({}).emitted(e));                    // tick 2
    CHECK_FALSE(prog.react({SignalEvent{cancel, {}, 0}}).emitted(e));  // tick 3
    CHECK(prog.react({}).emitted(e));                                  // tick 4
}

TEST_CASE("snapshot and restore") {
    auto prog = declare_program({make_toggle()}, one_pure_input("t"));

    SUBCASE("fresh snapshot holds the initial configuration") {
        auto s = prog.snapshot();
        CHECK(s.states == std::vector<std::uint32_t>{0});
        CHECK(s.tick == 0);
        prog.restore(s);
        auto s2 = prog.snapshot();
        CHECK(s.same_configuration(s2));
        CHECK(s.key() == s2.key());
    }

    SUBCASE("restore replays a reaction identically") {
        auto before = prog.snapshot();
        auto r1 = prog.react({});
        prog.restore(before);
        auto r2 = prog.react({});
        CHECK(format_reaction(r1, prog.signals()) == format_reaction(r2, prog.signals()));
        CHECK(prog.current_state(0) == 1);
    }

    SUBCASE("incompatible snapshot is rejected") {
        auto s = prog.snapshot();
        s.states.push_back(0);
        s.suspended.push_back(0);
        bool threw = false;
        try {
            prog.restore(s);
        } catch (const Error& e) {
            threw = true;
            CHECK(e.code() == ErrorCode::IncompatibleSnapshot);
        }
        CHECK(threw);
    }
}

TEST_CASE("brute-force enumeration of the toggle program finds two states") {
    auto prog = declare_program({make_toggle()}, one_pure_input("t"));
    auto t_sig = prog.signals().require("t");

    // independent oracle: explore all input subsets via snapshot/restore
    std::set<std::string> seen;
    std::vector<GlobalState> frontier{prog.snapshot()};
    seen.insert(frontier[0].key());
    std::vector<std::vector<SignalEvent>> alphabet{{}, {SignalEvent{t_sig, {}, 0}}};
    while (!frontier.empty()) {
        auto state = frontier.back();
        frontier.pop_back();
        for (const auto& letter : alphabet) {
            prog.restore(state);
            prog.react(letter);
            auto next = prog.snapshot();
            if (seen.insert(next.key()).second) frontier.push_back(next);
        }
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("undeclared and non-input signals are rejected as inputs") {
    SignalTable t;
    t.declare("in", SignalKind::Pure, true);
    auto internal = t.declare("internal");
    auto prog = declare_program({make_toggle()}, std::move(t));
    CHECK_THROWS_AS(prog.react({SignalEvent{internal, {}, 0}}), Error);
    CHECK_THROWS_AS(prog.react({SignalEvent{SignalId{99}, {}, 0}}), Error);
}

TEST_CASE("halt signal stops haltable automata from the next tick") {
    SignalTable t;
    auto quit = t.declare("quit", SignalKind::Pure, true);
    auto e = t.declare("E");
    ControlAutomaton a("loop");
    auto s = a.add_state("w");
    a.set_initial(s);
    a.add_transition({s, Guard::always(), {{e, PayloadSource::none()}}, s, {}});
    auto prog = declare_program({std::move(a)}, std::move(t));
    prog.set_halt_signal(quit);

    CHECK(prog.react({}).emitted(e));
    CHECK(prog.react({SignalEvent{quit, {}, 0}}).emitted(e));  // still fires this tick
    CHECK(prog.halted());
    CHECK_FALSE(prog.react({}).emitted(e));
}

TEST_CASE("trace round trip") {
    SignalTable t;
    auto go = t.declare("GO", SignalKind::Pure, true);
    auto v = t.declare("V", SignalKind::ValuedRange);
    ControlAutomaton a("w");
    auto s = a.add_state("w");
    a.set_initial(s);
    a.add_transition(
        {s, Guard::present(go), {{v, PayloadSource::constant(SampleRange{0, 1600})}}, s, {}});
    auto prog = declare_program({std::move(a)}, std::move(t));
    auto r = prog.react({SignalEvent{go, {}, 0}});
    auto line = format_reaction(r, prog.signals());
    CHECK(line == "tick=0 in=GO out=V=0:1600 steps=1");
    auto parsed = parse_trace_line(line);
    CHECK(parsed.tick == 0);
    CHECK(parsed.inputs == std::vector<std::string>{"GO"});
    REQUIRE(parsed.outputs.size() == 1);
    CHECK(parsed.outputs[0].first == "V");
    CHECK(parsed.outputs[0].second == "0:1600");
    CHECK(parsed.steps == 1);
}
