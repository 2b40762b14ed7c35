#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sparseseries {

/// Base class for all library errors. CLI maps these to exit code 2,
/// usage problems (InvalidInput from argument parsing) to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class NoRealRootAboveOne : public Error {
public:
    using Error::Error;
};

class ReducibleRejected : public Error {
public:
    using Error::Error;
};

class RefinementBudgetExceeded : public Error {
public:
    using Error::Error;
};

class HorizonTooLarge : public Error {
public:
    using Error::Error;
};

class OutOfHorizon : public Error {
public:
    using Error::Error;
};

class HorizonInsufficient : public Error {
public:
    HorizonInsufficient(const std::string& what, mpz_class minimal)
        : Error(what + " (minimal sufficient horizon: " + minimal.get_str() + ")"),
          minimal_sufficient_horizon(std::move(minimal)) {}

    mpz_class minimal_sufficient_horizon;
};

class MajorantTooWeak : public Error {
public:
    using Error::Error;
};

class UnresolvedIntervals : public Error {
public:
    UnresolvedIntervals(const std::string& what, std::vector<long> straddlers)
        : Error(what), unresolved(std::move(straddlers)) {}

    std::vector<long> unresolved;
};

class NonRationalField : public Error {
public:
    using Error::Error;
};

class TooFewElements : public Error {
public:
    using Error::Error;
};

class EmptySupport : public Error {
public:
    using Error::Error;
};

class NoWitnessFound : public Error {
public:
    NoWitnessFound(const std::string& what, std::vector<unsigned long> us)
        : Error(what), failing_u(std::move(us)) {}

    std::vector<unsigned long> failing_u;
};

class OverflowPolicy : public Error {
public:
    using Error::Error;
};

}  // namespace sparseseries
