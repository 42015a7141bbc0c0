#ifndef COLDFLEET_ERRORS_HPP
#define COLDFLEET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coldfleet {

// Base classes correspond to the CLI exit codes:
//   ConfigError -> 2, SimulationError -> 3, IoError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SimulationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---- configuration ----

class SchemaError : public ConfigError {
public:
    SchemaError(const std::string& field_path, const std::string& what)
        : ConfigError(field_path + ": " + what), field_path_(field_path) {}
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

class UnknownField : public ConfigError {
public:
    explicit UnknownField(const std::string& field_path)
        : ConfigError(field_path + ": unknown field"), field_path_(field_path) {}
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

// Invalid parameter values detected inside the simulation core. The config
// loader re-reports these as SchemaError with the offending field path.
class InvalidParameter : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// ---- battery ----

class NonPositiveStep : public SimulationError {
public:
    NonPositiveStep() : SimulationError("time step must be > 0") {}
};

class SohExhausted : public SimulationError {
public:
    SohExhausted() : SimulationError("state of health exhausted (would reach 0)") {}
};

// ---- fleet Monte Carlo ----

class LossOutOfRange : public SimulationError {
public:
    explicit LossOutOfRange(double loss)
        : SimulationError("efficiency loss must be in [0,1), got " + std::to_string(loss)) {}
};

class EmptySamples : public SimulationError {
public:
    EmptySamples() : SimulationError("sample list is empty") {}
};

// ---- route simulation ----

class StartBelowFloor : public SimulationError {
public:
    StartBelowFloor() : SimulationError("start SoC is not above the SoC floor") {}
};

class InfeasibleRoute : public SimulationError {
public:
    explicit InfeasibleRoute(const std::string& what) : SimulationError(what) {}
};

// ---- swap station ----

class NoSlotsFree : public SimulationError {
public:
    NoSlotsFree() : SimulationError("no free rack slot for returned battery") {}
};

// ---- power quality ----

class ParseError : public SimulationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : SimulationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class InvariantViolation : public SimulationError {
public:
    InvariantViolation(std::size_t line, const std::string& what)
        : SimulationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class InsufficientData : public SimulationError {
public:
    explicit InsufficientData(const std::string& what) : SimulationError(what) {}
};

class EmptyInput : public SimulationError {
public:
    EmptyInput() : SimulationError("input record list is empty") {}
};

}  // namespace coldfleet

#endif  // COLDFLEET_ERRORS_HPP
