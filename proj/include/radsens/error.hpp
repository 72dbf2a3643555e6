#ifndef RADSENS_ERROR_HPP
#define RADSENS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace radsens {

/// Base for every error caused by bad input or an unsatisfiable request.
/// The CLI maps these to exit code 1; anything else is an internal error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (bad numbers, ragged rows, duplicate identifiers).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a documented precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace radsens

#endif
