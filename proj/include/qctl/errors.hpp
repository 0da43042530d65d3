#pragma once

#include <stdexcept>
#include <string>

namespace qctl {

/// Precondition violated by caller-supplied data (shape, range, finiteness).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Angle between two operators requested with a zero operator.
class UndefinedAngle : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Objective kind does not support the requested quantity.
class WrongObjective : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fixed-step integration lost trace or boundedness (usually dt too large).
class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stochastic trajectory collapsed (trace vanished before renormalization).
class TrajectoryFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State is a superposition of syndrome sectors.
class IndeterminateSyndrome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syndrome is not in the single-error table.
class Uncorrectable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qctl
