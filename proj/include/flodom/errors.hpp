#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flodom {

// Base class for everything this library throws on bad input or bad data.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyCloud : Error {
    EmptyCloud() : Error("point cloud is empty") {}
    explicit EmptyCloud(const std::string& what) : Error(what) {}
};

struct SizeMismatch : Error {
    using Error::Error;
};

struct TooFewPoints : Error {
    using Error::Error;
};

struct DegenerateInput : Error {
    using Error::Error;
};

struct BadCount : Error {
    using Error::Error;
};

struct GimbalLock : Error {
    GimbalLock() : Error("pose_to_euler: |R(2,0)| ~ 1, pitch at +-pi/2") {}
};

struct NumericalFailure : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct MalformedFile : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_number)
        : Error(what + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
    std::size_t line;
};

struct LengthMismatch : Error {
    using Error::Error;
};

}  // namespace flodom
