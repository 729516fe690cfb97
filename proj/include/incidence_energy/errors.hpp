#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace incidence_energy {

// Caller broke a precondition (bad vertex index, mismatched orientation, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input exceeds a supported size limit (graph6 short form, canonical search).
class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("byte " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double off_norm, int sweeps)
      : std::runtime_error("Jacobi iteration did not converge after " +
                           std::to_string(sweeps) +
                           " sweeps, off-diagonal norm " + sci(off_norm)),
        off_norm_(off_norm) {}

  ConvergenceError(const std::string& what, double off_norm)
      : std::runtime_error(what), off_norm_(off_norm) {}

  double off_norm() const noexcept { return off_norm_; }

 private:
  static std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
  }

  double off_norm_;
};

// An eigenvalue of a Gram matrix came out clearly negative; the solve is broken.
class NegativeEigenvalueError : public std::runtime_error {
 public:
  explicit NegativeEigenvalueError(double value)
      : std::runtime_error("eigenvalue " + std::to_string(value) +
                           " below the PSD clamp tolerance"),
        value_(value) {}

  double value() const noexcept { return value_; }

 private:
  double value_;
};

}  // namespace incidence_energy
