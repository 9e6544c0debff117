#pragma once

#include <stdexcept>
#include <string>

namespace lrwave {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent run configuration (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Potential family / energy constraint fails the admissibility gate (exit 3).
struct AdmissibilityError : Error {
  using Error::Error;
};

// Fixed-point iteration did not converge: iteration cap, stagnation, or
// singularity guard (exit 4).
struct ConvergenceError : Error {
  using Error::Error;
};

// Lattice simulation failure: collision, boundary contamination (exit 5).
struct SimulationError : Error {
  using Error::Error;
};

// Argument outside an operation's domain (singular evaluation, grid mismatch,
// unsupported derivative order, ...).
struct DomainError : Error {
  using Error::Error;
};

}  // namespace lrwave
