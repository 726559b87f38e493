#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kserver {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A state space, vertex count or transition table would exceed its cap.
class TooLarge : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

// An adversary construction reached a state its invariants rule out.
class InternalError : public Error {
public:
    using Error::Error;
};

class InvalidSchedule : public Error {
public:
    InvalidSchedule(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace kserver
