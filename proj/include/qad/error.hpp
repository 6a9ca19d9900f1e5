#pragma once

#include <stdexcept>
#include <string>

namespace qad {

// Base for every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Input data (CSV, JSON) is malformed or inconsistent.
class DataError : public Error {
public:
    using Error::Error;
};

class SingularCovariance : public Error {
public:
    using Error::Error;
};

// A solver refused an instance outside its supported size.
class SolverLimit : public Error {
public:
    using Error::Error;
};

} // namespace qad
