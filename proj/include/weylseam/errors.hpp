// Error taxonomy shared by the library and the CLI.
//
// Every failure the library can signal carries one of the kinds below; the
// CLI prints the kind name verbatim on stderr, so the names are part of the
// external interface and must not be renamed casually.
#pragma once

#include <stdexcept>
#include <string>

namespace weylseam {

enum class ErrorKind {
    InvalidInput,          // precondition violated by the caller
    SingularMatrix,        // pivot collapse in a linear solve
    OutOfDomain,           // argument outside the mathematical domain
    DenominatorCollapse,   // Weyl/Schur denominator numerically vanished
    InvalidPerturbation,   // perturbed Hamiltonian leaves the positivity margin
    NoConvergence,         // iteration diverged or escaped its trust region
    RankDeficientJacobian, // sampling design gives sigma_min ~ 0
    ConstructionError,     // a constructed object violates its own invariant
    NearPole,              // Cayley/Mobius evaluation too close to a pole
    NumericalError,        // internal consistency check failed (library bug or
                           // catastrophic roundoff; should never fire in tests)
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput:          return "InvalidInput";
        case ErrorKind::SingularMatrix:        return "SingularMatrix";
        case ErrorKind::OutOfDomain:           return "OutOfDomain";
        case ErrorKind::DenominatorCollapse:   return "DenominatorCollapse";
        case ErrorKind::InvalidPerturbation:   return "InvalidPerturbation";
        case ErrorKind::NoConvergence:         return "NoConvergence";
        case ErrorKind::RankDeficientJacobian: return "RankDeficientJacobian";
        case ErrorKind::ConstructionError:     return "ConstructionError";
        case ErrorKind::NearPole:              return "NearPole";
        case ErrorKind::NumericalError:        return "NumericalError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

} // namespace weylseam
