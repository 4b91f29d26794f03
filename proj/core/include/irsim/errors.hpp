// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace irsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vector/matrix sizes that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Argument outside the domain of a function (negative distance, bad spacing, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid experiment configuration; the message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A scheme cannot be evaluated on this channel draw (zero channel, undefined MRT).
// The harness counts these per trial instead of aborting.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// The channel does not follow the structure a scheme relies on (rank-one BS-IRS link).
class StructuralError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace irsim
