#pragma once

#include <stdexcept>
#include <string>

namespace kmfp {

/// A point was used outside the space (or subset) it belongs to.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An argument is outside its admissible range (λ ∉ [0,1], ε ≤ 0, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller-supplied hypothesis (probe contract, orbit bound, contraction
/// constant) was observed to fail.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An inequality that must hold whenever the hypotheses hold was violated.
/// Seeing one of these means the implementation (or a map claimed to be
/// nonexpansive) is wrong.
class InvariantFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An approximate-fixed-point oracle could not meet its tolerance.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound is too large even for a log10 representation (a tower of
/// exponentials). Only reachable for extreme rate inputs.
class MagnitudeOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace kmfp
