#pragma once

#include <stdexcept>
#include <string>

namespace monotraj {

// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point at or behind the camera plane cannot be projected.
class NonPositiveDepth : public Error {
 public:
  using Error::Error;
};

// A ray with (near-)zero norm has no direction.
class ZeroVector : public Error {
 public:
  using Error::Error;
};

// Fewer than two foreground pixels: orientation undefined.
class DegenerateMask : public Error {
 public:
  using Error::Error;
};

// Covariance eigenvalues are equal: principal direction undefined.
class IsotropicMask : public Error {
 public:
  using Error::Error;
};

// Segment endpoints collapse to (almost) coincident rays.
class DegenerateAngle : public Error {
 public:
  using Error::Error;
};

// Drone class missing from the specification database.
class UnknownClass : public Error {
 public:
  using Error::Error;
};

// Motion or scenario specification is internally inconsistent.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// File could not be read or written; message carries the path.
class IoFailure : public Error {
 public:
  using Error::Error;
};

// Malformed input file contents (CSV, JSON, PGM).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Tracking metric is undefined without ground-truth objects.
class EmptyGroundTruth : public Error {
 public:
  using Error::Error;
};

// Two trajectories share no common frame.
class NoOverlap : public Error {
 public:
  using Error::Error;
};

}  // namespace monotraj
