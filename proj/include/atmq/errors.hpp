#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atmq {

// Base of every error raised by the library. `category()` is a short
// machine-readable tag used by the command-line front end.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* category() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* category() const noexcept override { return "invalid-argument"; }
};

/// Adaptive quadrature gave up before reaching the requested tolerance.
class AccuracyError : public Error {
  public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    [[nodiscard]] double estimate() const noexcept { return estimate_; }
    [[nodiscard]] double error_bound() const noexcept { return error_bound_; }
    [[nodiscard]] const char* category() const noexcept override { return "numerical"; }

  private:
    double estimate_;
    double error_bound_;
};

/// A transmittance selection left no probability mass.
class EmptySelectionError : public Error {
  public:
    EmptySelectionError(const std::string& what, double surviving_mass)
        : Error(what), surviving_mass_(surviving_mass) {}

    [[nodiscard]] double surviving_mass() const noexcept { return surviving_mass_; }
    [[nodiscard]] const char* category() const noexcept override { return "empty-selection"; }

  private:
    double surviving_mass_;
};

/// An integrand or closed form is singular on the requested domain, or a
/// ratio is undefined (zero denominator).
class SingularityError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* category() const noexcept override { return "numerical"; }
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const char* category() const noexcept override { return "parse"; }

  private:
    std::size_t line_;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace atmq
