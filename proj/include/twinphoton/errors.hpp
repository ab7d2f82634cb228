#ifndef TWINPHOTON_ERRORS_HPP
#define TWINPHOTON_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace twinphoton
{

// Invalid physical quantity (negative power, non-finite value, no idler, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Argument outside a model's declared validity range.
class RangeError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

// Configuration value violating a documented bound.
class ConfigError : public std::invalid_argument
{
public:
    ConfigError(std::string field, const std::string &what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }

    const std::string &field() const noexcept { return field_; }

private:
    std::string field_;
};

// Malformed input file. Line numbers are 1-based; 0 means "not line specific".
class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string &source, std::size_t line, const std::string &what)
        : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Rate inversion impossible with the given counts.
class InferenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Phase-matching solve without a solution.
class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Simulation would exceed the event memory budget.
class SizingError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace twinphoton

#endif // TWINPHOTON_ERRORS_HPP
