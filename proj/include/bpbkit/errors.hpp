#pragma once

#include <stdexcept>
#include <string>

namespace bpbkit {

enum class ErrorKind {
  DimensionMismatch,
  DomainError,
  HypothesisNotMet,
  NotInPi,
  NotUnitNorm,
  EmptyP,
  InternalInvariant,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg)
      : Error(ErrorKind::DimensionMismatch, msg) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg)
      : Error(ErrorKind::DomainError, msg) {}
};

/// The near-attainment hypothesis of a correction failed. Carries the
/// observed deficit 1 - Re(pairing) and the admissible slack so callers can
/// report how far off the input was.
class HypothesisNotMet : public Error {
 public:
  HypothesisNotMet(double deficit, double slack, const std::string& msg)
      : Error(ErrorKind::HypothesisNotMet, msg),
        deficit_(deficit),
        slack_(slack) {}
  double deficit() const { return deficit_; }
  double slack() const { return slack_; }

 private:
  double deficit_;
  double slack_;
};

class NotInPi : public Error {
 public:
  explicit NotInPi(const std::string& msg) : Error(ErrorKind::NotInPi, msg) {}
};

class NotUnitNorm : public Error {
 public:
  explicit NotUnitNorm(const std::string& msg)
      : Error(ErrorKind::NotUnitNorm, msg) {}
};

/// The kept-support set came out empty, so the normalization 1/M is
/// undefined. Only reachable when the hypothesis check was force-bypassed.
class EmptyP : public Error {
 public:
  explicit EmptyP(const std::string& msg) : Error(ErrorKind::EmptyP, msg) {}
};

class InternalInvariant : public Error {
 public:
  explicit InternalInvariant(const std::string& msg)
      : Error(ErrorKind::InternalInvariant, msg) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg)
      : Error(ErrorKind::ParseError, msg) {}
};

}  // namespace bpbkit
