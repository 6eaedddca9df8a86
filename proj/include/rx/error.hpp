#pragma once

#include <stdexcept>
#include <string>

namespace rx {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data (bad bytes, wrong column count, bad header...).
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line(line) {}
    std::size_t line;
};

struct IoError : Error {
    using Error::Error;
};

// Violated operation precondition (wrong image size, bad config value...).
struct InvalidArgument : Error {
    using Error::Error;
};

}  // namespace rx
