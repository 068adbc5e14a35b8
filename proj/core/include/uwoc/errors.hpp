#ifndef UWOC_ERRORS_HPP
#define UWOC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uwoc {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Generic precondition / invariant violation on an input value.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// --- core ---

class ZeroMeanTrace : public Error {
public:
    using Error::Error;
};

class DegenerateRange : public Error {
public:
    using Error::Error;
};

// --- distributions ---

class NumericOverflow : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class BracketFailure : public Error {
public:
    using Error::Error;
};

class UnderdeterminedFamily : public Error {
public:
    using Error::Error;
};

class OutOfSupport : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

// --- estimation ---

class TooFewSamples : public Error {
public:
    using Error::Error;
};

class ZeroVariance : public Error {
public:
    using Error::Error;
};

// --- fitting ---

class DegenerateHistogram : public Error {
public:
    using Error::Error;
};

class InfeasibleFamily : public Error {
public:
    using Error::Error;
};

// --- simulation ---

class UnresolvableCoherence : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

// --- file I/O ---

/// Raised on malformed trace files; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

}  // namespace uwoc

#endif
