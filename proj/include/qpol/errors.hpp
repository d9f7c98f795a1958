#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments are well formed but a numerical precondition does not hold
/// (bad cutoff, unnormalized sampler, cancelling superposition, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class DegenerateSuperposition : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class CutoffTooSmall : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class UnnormalizedSampler : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NegativeRadicand : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NonHermitianExpectation : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// An internal identity failed beyond its rounding allowance
/// (e.g. a Q value or a variance noticeably below zero).
class ConsistencyError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Argument outside the domain accepted by a constructor or command.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonRealParameter : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class UnsupportedState : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

using WarningSink = std::function<void(std::string_view)>;

inline WarningSink& warning_sink() {
    static WarningSink sink = [](std::string_view msg) { std::clog << "qpol: warning: " << msg << '\n'; };
    return sink;
}

inline void warn(std::string_view msg) {
    if (auto& sink = warning_sink()) sink(msg);
}

}  // namespace qpol
