#pragma once

#include <string>
#include <vector>

#include "tickflow/program.hpp"

namespace tickflow {

// A safety property attached in parallel with the observed program. The
// observer only reads program signals and emits its violation signal; it
// never steers the program.
struct ObserverSpec {
    std::string name;
    std::vector<ControlAutomaton> automata;
    std::string violation;
    std::uint32_t bound = 0;  // D, for the tick-counting observers
};

// Builds observers against a copy of the target program's signal table; the
// extended table is what compose() uses. Declaring the same violation
// signal twice is a SignalCollision.
class ObserverBuilder {
  public:
    explicit ObserverBuilder(const SignalTable& target) : table_(target) {}

    const SignalTable& table() const { return table_; }

    // Handshake readiness: whenever `compute` is present at tick t, `ready`
    // must have been present at t-1. One watcher covers every given edge.
    ObserverSpec s1(const std::vector<std::pair<std::string, std::string>>& ready_compute_pairs,
                    const std::string& violation = "S1_VIOLATED");

    // Bounded delivery, one-shot: after the first `is` occurrence, `os`
    // must occur within D ticks.
    ObserverSpec s2(std::uint32_t bound, const std::string& is, const std::string& os,
                    const std::string& violation = "S2_VIOLATED");

    // Bounded response, looping, instantiated per module: whenever all of
    // `is` are present together, `os` must follow within D ticks. The
    // instances share one violation output.
    struct S3Instance {
        std::string name;
        std::vector<std::string> is;
        std::string os;
    };
    ObserverSpec s3(std::uint32_t bound, const std::vector<S3Instance>& instances,
                    const std::string& violation = "S3_VIOLATED");

  private:
    SignalId declare_violation(const std::string& name);
    SignalTable table_;
};

// Synchronous parallel composition: the observed program's behavior is
// unchanged (its trace projection is preserved); the observers' violation
// signals join the outputs. Observer automata are exempt from the
// program's halt signal.
Program compose(const Program& target, const SignalTable& extended,
                const std::vector<ObserverSpec>& observers);

}  // namespace tickflow
