#pragma once

#include <stdexcept>
#include <string>

namespace tickflow {

enum class ErrorCode {
    // program construction
    DuplicateSignal,
    NondeterministicAutomaton,
    UnknownSignalInGuard,
    UnknownSignal,
    NonMonotoneGuard,
    UnreachableState,
    // reaction
    FixpointDivergence,
    ConflictingValuedEmission,
    ProgramHalted,
    // suspension
    NotSuspendable,
    NotSuspended,
    // snapshot
    IncompatibleSnapshot,
    // dataplane
    InsufficientData,
    BufferOverrun,
    StaleRange,
    PortAlreadyBound,
    RateMismatch,
    WrongSampleWidth,
    // topology / scheduling
    CyclicTopology,
    DanglingPort,
    IncompatibleRates,
    OutputDivergence,
    // verification
    StateExplosion,
    UnboundedCounter,
    SignalCollision,
    WitnessMismatch,
    // gsm chain
    WrongFrameLength,
    UncorrectableFrame,
    WrongBurstCount,
    ShortKeystream,
    BadOversampling,
    // io / cli
    BadConfig,
    IoFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace tickflow
