#include "pns/errors.hpp"

namespace pns {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ShapeMismatch: return "shape-mismatch";
        case ErrorKind::GridMismatch: return "grid-mismatch";
        case ErrorKind::BadArgument: return "bad-argument";
        case ErrorKind::UnsupportedNorm: return "unsupported-norm";
        case ErrorKind::BlockOutOfRange: return "block-out-of-range";
        case ErrorKind::EmptyTrajectory: return "empty-trajectory";
        case ErrorKind::WindowExceeded: return "window-exceeded";
        case ErrorKind::GridTooSmall: return "grid-too-small";
        case ErrorKind::VacuumBreach: return "vacuum-breach";
        case ErrorKind::CflViolation: return "cfl-violation";
        case ErrorKind::NonFinite: return "non-finite";
        case ErrorKind::Uncertified: return "uncertified";
        case ErrorKind::MissingProbe: return "missing-probe";
        case ErrorKind::ConfigInvalid: return "config-invalid";
        case ErrorKind::IoFailure: return "io-failure";
    }
    return "unknown";
}

}  // namespace pns
