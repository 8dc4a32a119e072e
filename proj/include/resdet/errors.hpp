#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace resdet {

// Root of every library exception; the CLI maps these to exit code 2
// (configuration/data problems) or reports them as failed checks.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientSpectrum : public Error {
 public:
  InsufficientSpectrum(const std::string& what, double bound, double tol)
      : Error(what), bound(bound), tol(tol) {}
  double bound;
  double tol;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line(line) {}
  long line;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& invariant, const std::string& what)
      : Error(invariant + ": " + what), invariant(invariant) {}
  std::string invariant;
};

class OutsideHalfPlane : public Error {
 public:
  using Error::Error;
};

class PoleTooClose : public Error {
 public:
  PoleTooClose(std::complex<double> pole, double distance, double clearance)
      : Error("pole at (" + std::to_string(pole.real()) + "," +
              std::to_string(pole.imag()) + ") within " +
              std::to_string(distance) + " of the ray (clearance " +
              std::to_string(clearance) + ")"),
        pole(pole),
        distance(distance) {}
  std::complex<double> pole;
  double distance;
};

class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, double estimate)
      : Error(what), estimate(estimate) {}
  double estimate;
};

class PoleHit : public Error {
 public:
  using Error::Error;
};

class MissingSingularity : public Error {
 public:
  MissingSingularity(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

class AngleConstraint : public Error {
 public:
  using Error::Error;
};

class OnSingularLattice : public Error {
 public:
  using Error::Error;
};

class HypothesisViolation : public Error {
 public:
  HypothesisViolation(const std::string& hypothesis, const std::string& what)
      : Error(hypothesis + ": " + what), hypothesis(hypothesis) {}
  std::string hypothesis;
};

class NoFit : public Error {
 public:
  using Error::Error;
};

class RadiusExceeded : public Error {
 public:
  RadiusExceeded(const std::string& what, double radius)
      : Error(what), radius(radius) {}
  double radius;
};

}  // namespace resdet
