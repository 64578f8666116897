#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semispec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression text could not be parsed; `offset` is the byte position.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off)
        : Error(what + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

// Division by zero, overflow, or other domain failure while evaluating v(x).
struct EvalDomainError : Error {
    using Error::Error;
};

// A root of v = lambda has |v'| below the critical-slope threshold.
struct CriticalEnergyError : Error {
    using Error::Error;
};

// v <= lambda at a truncation endpoint.
struct EndpointError : Error {
    using Error::Error;
};

// Turning points do not alternate falling/rising as a well/barrier sequence.
struct DecompositionError : Error {
    using Error::Error;
};

// Well/barrier count changed inside an energy bracket.
struct TopologyError : Error {
    using Error::Error;
};

struct FrameError : Error {
    using Error::Error;
};

struct IntegrationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace semispec
