#include "tickflow/observers.hpp"

namespace tickflow {

SignalId ObserverBuilder::declare_violation(const std::string& name) {
    if (table_.lookup(name).valid())
        raise(ErrorCode::SignalCollision, "violation signal '" + name + "' already declared");
    return table_.declare(name, SignalKind::Pure);
}

ObserverSpec ObserverBuilder::s1(
    const std::vector<std::pair<std::string, std::string>>& ready_compute_pairs,
    const std::string& violation) {
    auto bug = declare_violation(violation);
    ControlAutomaton watch("obs_" + violation);
    watch.set_haltable(false);
    auto w = watch.add_state("watch");
    watch.set_initial(w);
    std::vector<Guard> alts;
    for (const auto& [ready, compute] : ready_compute_pairs) {
        auto r = table_.require(ready);
        auto c = table_.require(compute);
        alts.push_back(Guard::present(c) && !Guard::pre(r));
    }
    watch.add_transition(
        {w, Guard::any_of(std::move(alts)), {{bug, PayloadSource::none()}}, w, {}});

    ObserverSpec spec;
    spec.name = "S1";
    spec.violation = violation;
    spec.automata.push_back(std::move(watch));
    return spec;
}

ObserverSpec ObserverBuilder::s2(std::uint32_t bound, const std::string& is,
                                 const std::string& os, const std::string& violation) {
    if (bound == 0) raise(ErrorCode::BadConfig, "S2 bound must be positive");
    auto bug = declare_violation(violation);
    auto is_id = table_.require(is);
    auto os_id = table_.require(os);

    ControlAutomaton obs("obs_" + violation);
    obs.set_haltable(false);
    auto idle = obs.add_state("idle");
    std::vector<std::uint32_t> chain;
    for (std::uint32_t i = 1; i <= bound; ++i)
        chain.push_back(obs.add_state("count" + std::to_string(i)));
    auto done = obs.add_state("done");
    obs.set_initial(idle);

    // the countdown watches the previous tick, so the window [t+1, t+D]
    // after an arming occurrence at t is inspected exactly once
    obs.add_transition({idle, Guard::pre(is_id) && Guard::pre(os_id), {}, done, {}});
    obs.add_transition({idle, Guard::pre(is_id) && !Guard::pre(os_id), {}, chain[0], {}});
    for (std::uint32_t i = 0; i < bound; ++i) {
        obs.add_transition({chain[i], Guard::pre(os_id), {}, done, {}});
        if (i + 1 < bound) {
            obs.add_transition({chain[i], !Guard::pre(os_id), {}, chain[i + 1], {}});
        } else {
            obs.add_transition(
                {chain[i], !Guard::pre(os_id), {{bug, PayloadSource::none()}}, done, {}});
        }
    }

    ObserverSpec spec;
    spec.name = "S2";
    spec.violation = violation;
    spec.bound = bound;
    spec.automata.push_back(std::move(obs));
    return spec;
}

ObserverSpec ObserverBuilder::s3(std::uint32_t bound, const std::vector<S3Instance>& instances,
                                 const std::string& violation) {
    if (bound == 0) raise(ErrorCode::BadConfig, "S3 bound must be positive");
    auto bug = declare_violation(violation);

    ObserverSpec spec;
    spec.name = "S3";
    spec.violation = violation;
    spec.bound = bound;

    std::vector<SignalId> flags;
    for (const auto& inst : instances) {
        auto flag = table_.declare(violation + "_" + inst.name, SignalKind::Pure);
        flags.push_back(flag);
        if (inst.is.empty() || inst.is.size() > 2)
            raise(ErrorCode::BadConfig, "S3 instances watch one or two arming signals");
        auto os_id = table_.require(inst.os);
        Guard o = Guard::pre(os_id);

        // waiting states latch each arming signal as it arrives; the window
        // opens the tick the last one lands
        ControlAutomaton obs("obs_" + violation + "_" + inst.name);
        obs.set_haltable(false);
        auto idle = obs.add_state("await_all");
        std::vector<std::uint32_t> chain;
        for (std::uint32_t i = 1; i <= bound; ++i)
            chain.push_back(obs.add_state("count" + std::to_string(i)));
        obs.set_initial(idle);

        if (inst.is.size() == 1) {
            Guard a = Guard::pre(table_.require(inst.is[0]));
            obs.add_transition({idle, a && o, {}, idle, {}});
            obs.add_transition({idle, a && !o, {}, chain[0], {}});
        } else {
            Guard a = Guard::pre(table_.require(inst.is[0]));
            Guard b = Guard::pre(table_.require(inst.is[1]));
            auto only_a = obs.add_state("await_second");
            auto only_b = obs.add_state("await_first");
            obs.add_transition({idle, a && b && o, {}, idle, {}});
            obs.add_transition({idle, a && b && !o, {}, chain[0], {}});
            obs.add_transition({idle, a && !b, {}, only_a, {}});
            obs.add_transition({idle, !a && b, {}, only_b, {}});
            obs.add_transition({only_a, b && o, {}, idle, {}});
            obs.add_transition({only_a, b && !o, {}, chain[0], {}});
            obs.add_transition({only_b, a && o, {}, idle, {}});
            obs.add_transition({only_b, a && !o, {}, chain[0], {}});
        }
        for (std::uint32_t i = 0; i < bound; ++i) {
            obs.add_transition({chain[i], o, {}, idle, {}});
            if (i + 1 < bound) {
                obs.add_transition({chain[i], !o, {}, chain[i + 1], {}});
            } else {
                obs.add_transition(
                    {chain[i], !o, {{flag, PayloadSource::none()}}, idle, {}});
            }
        }
        spec.automata.push_back(std::move(obs));
    }

    // collector folds per-instance flags into the shared violation signal
    ControlAutomaton collect("obs_" + violation + "_any");
    collect.set_haltable(false);
    auto w = collect.add_state("watch");
    collect.set_initial(w);
    std::vector<Guard> alts;
    for (auto f : flags) alts.push_back(Guard::present(f));
    collect.add_transition(
        {w, Guard::any_of(std::move(alts)), {{bug, PayloadSource::none()}}, w, {}});
    spec.automata.push_back(std::move(collect));
    return spec;
}

Program compose(const Program& target, const SignalTable& extended,
                const std::vector<ObserverSpec>& observers) {
    for (std::size_t i = 0; i < target.signals().size(); ++i) {
        auto id = SignalId{static_cast<std::uint32_t>(i)};
        if (extended.size() <= i || extended.name(id) != target.signals().name(id))
            raise(ErrorCode::IncompatibleSnapshot,
                  "extended table does not extend the target program's table");
    }
    for (std::size_t i = 0; i < observers.size(); ++i)
        for (std::size_t j = i + 1; j < observers.size(); ++j)
            if (observers[i].violation == observers[j].violation)
                raise(ErrorCode::SignalCollision,
                      "two observers declare '" + observers[i].violation + "'");

    std::vector<ControlAutomaton> automata = target.automata();
    for (const auto& spec : observers)
        for (const auto& a : spec.automata) automata.push_back(a);
    Program composed = declare_program(std::move(automata), extended);
    if (target.halt_signal().valid()) composed.set_halt_signal(target.halt_signal());
    // observers are appended after the target's automata, so the target's
    // suspension bindings keep their indices
    for (const auto& rdv : target.rendezvous()) composed.add_rendezvous(rdv);
    return composed;
}

}  // namespace tickflow
