#pragma once

#include <stdexcept>
#include <string>

namespace proteograph {

// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid function arguments or configuration values.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

// A weight family leaves some vertex with zero weighted degree.
class IsolatedVertexError : public Error {
  public:
    IsolatedVertexError(std::size_t vertex, const std::string& what)
        : Error(what), vertex_(vertex) {}
    std::size_t vertex() const noexcept { return vertex_; }

  private:
    std::size_t vertex_;
};

// Malformed input files.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Config file problems and unknown scenario names.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// Raised when the integrator cannot find an acceptable step.
class StepSizeError : public Error {
  public:
    using Error::Error;
};

// NaN/Inf in the simulation state.
class StateCorruptionError : public Error {
  public:
    using Error::Error;
};

}  // namespace proteograph
