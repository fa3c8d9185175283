#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjs {

// Every library failure derives from Error so the CLI can map the family onto
// an exit status without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

class DegenerateStateError : public Error {
public:
    using Error::Error;
};

class GridTooSmallError : public Error {
public:
    using Error::Error;
};

// Phase undefined at a point: amplitude below the floor inside the support, or
// an unresolved phase jump between neighbours.
class NodeError : public Error {
public:
    NodeError(std::size_t index, const std::string& what);
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class NumericalBlowup : public Error {
public:
    NumericalBlowup(std::size_t step, const std::string& what);
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace hjs
