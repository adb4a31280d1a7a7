#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace quatspec
{

/// Short %g rendering of a real number for error messages.
inline std::string format_real(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Numerical preconditions on scalars (e.g. inverting the zero quaternion).
class DomainError : public Error
{
public:
  using Error::Error;
};

class DimError : public Error
{
public:
  using Error::Error;
};

// Matrix larger than the dense desk-scale cap.
class SizeError : public Error
{
public:
  using Error::Error;
};

// A complex matrix that is not the image of a quaternionic one under chi.
class StructureError : public Error
{
public:
  using Error::Error;
};

// LU pivot below pivot_tol * ||chi(T)||.
class SingularError : public Error
{
public:
  using Error::Error;
};

class RankParityError : public Error
{
public:
  using Error::Error;
};

class ConvergenceError : public Error
{
public:
  using Error::Error;
};

// Eigenvalue cluster with an odd number of complex points.
class ParityError : public Error
{
public:
  using Error::Error;
};

class ContourError : public Error
{
public:
  using Error::Error;
};

class NonIdempotentError : public Error
{
public:
  using Error::Error;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

// Computed projector rank disagrees with the sphere multiplicity.
class ClassificationError : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  using Error::Error;
};

}  // namespace quatspec
