#pragma once

#include <stdexcept>
#include <string>

namespace certify {

// All failures surfaced by the library are subclasses of Error, so the CLI
// can map them onto PRECONDITION_FAILED / operational exit codes uniformly.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexObstruction : Error {
    explicit IndexObstruction(const std::string& m) : Error(m) {}
};
struct DenominatorAtEll : Error {
    explicit DenominatorAtEll(const std::string& m) : Error(m) {}
};
struct InsufficientCoefficients : Error {
    long needed_n;
    InsufficientCoefficients(const std::string& m, long n) : Error(m), needed_n(n) {}
};
struct NotSquarefree : Error {
    explicit NotSquarefree(const std::string& m) : Error(m) {}
};
struct NoDescent : Error {
    explicit NoDescent(const std::string& m) : Error(m) {}
};
struct OrderCollision : Error {
    explicit OrderCollision(const std::string& m) : Error(m) {}
};
struct NotCoprime : Error {
    explicit NotCoprime(const std::string& m) : Error(m) {}
};
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& m) : Error(m) {}
};
struct NotFound : Error {
    explicit NotFound(const std::string& m) : Error(m) {}
};
struct ValidationFailed : Error {
    explicit ValidationFailed(const std::string& m) : Error(m) {}
};
struct NetworkUnavailable : Error {
    explicit NetworkUnavailable(const std::string& m) : Error(m) {}
};
struct InsufficientPrecision : Error {
    long required;
    InsufficientPrecision(const std::string& m, long req) : Error(m), required(req) {}
};
struct OddWeight : Error {
    explicit OddWeight(const std::string& m) : Error(m) {}
};

}  // namespace certify
