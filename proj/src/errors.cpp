#include "tickflow/errors.hpp"

namespace tickflow {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateSignal: return "DuplicateSignal";
        case ErrorCode::NondeterministicAutomaton: return "NondeterministicAutomaton";
        case ErrorCode::UnknownSignalInGuard: return "UnknownSignalInGuard";
        case ErrorCode::UnknownSignal: return "UnknownSignal";
        case ErrorCode::NonMonotoneGuard: return "NonMonotoneGuard";
        case ErrorCode::UnreachableState: return "UnreachableState";
        case ErrorCode::FixpointDivergence: return "FixpointDivergence";
        case ErrorCode::ConflictingValuedEmission: return "ConflictingValuedEmission";
        case ErrorCode::ProgramHalted: return "ProgramHalted";
        case ErrorCode::NotSuspendable: return "NotSuspendable";
        case ErrorCode::NotSuspended: return "NotSuspended";
        case ErrorCode::IncompatibleSnapshot: return "IncompatibleSnapshot";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::BufferOverrun: return "BufferOverrun";
        case ErrorCode::StaleRange: return "StaleRange";
        case ErrorCode::PortAlreadyBound: return "PortAlreadyBound";
        case ErrorCode::RateMismatch: return "RateMismatch";
        case ErrorCode::WrongSampleWidth: return "WrongSampleWidth";
        case ErrorCode::CyclicTopology: return "CyclicTopology";
        case ErrorCode::DanglingPort: return "DanglingPort";
        case ErrorCode::IncompatibleRates: return "IncompatibleRates";
        case ErrorCode::OutputDivergence: return "OutputDivergence";
        case ErrorCode::StateExplosion: return "StateExplosion";
        case ErrorCode::UnboundedCounter: return "UnboundedCounter";
        case ErrorCode::SignalCollision: return "SignalCollision";
        case ErrorCode::WitnessMismatch: return "WitnessMismatch";
        case ErrorCode::WrongFrameLength: return "WrongFrameLength";
        case ErrorCode::UncorrectableFrame: return "UncorrectableFrame";
        case ErrorCode::WrongBurstCount: return "WrongBurstCount";
        case ErrorCode::ShortKeystream: return "ShortKeystream";
        case ErrorCode::BadOversampling: return "BadOversampling";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "UnknownError";
}

}  // namespace tickflow
