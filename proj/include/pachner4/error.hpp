#pragma once

#include <stdexcept>
#include <string>

namespace pachner4 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed combinatorics: duplicate simplex, non-manifold tetrahedron,
/// unexpected boundary, unknown face.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A 3->3 move was requested where it is not defined.
class MovePreconditionError : public Error {
 public:
  using Error::Error;
};

/// A simplex (or triangle) has (numerically) zero volume.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A table of squared lengths does not come from a Euclidean 4-simplex.
class NonRealizableError : public Error {
 public:
  using Error::Error;
};

/// A per-simplex area map dS/dL is singular, so area deformations are
/// not well defined for this placement.
class NonGenericError : public Error {
 public:
  using Error::Error;
};

/// Submatrix selection problems (zero forced row, singular swap).
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Document syntax or schema violations.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace pachner4
