#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sensekit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Malformed binary input; carries the byte offset where decoding stopped.
class FormatError : public Error {
public:
    FormatError(std::size_t offset, const std::string& message)
        : Error("byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Network failure talking to a vector server. Retrying may succeed.
class ConnectionError : public Error {
public:
    using Error::Error;
    bool retryable() const noexcept { return true; }
};

}  // namespace sensekit
